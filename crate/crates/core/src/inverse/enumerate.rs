//! Exhaustive enumeration of small circuits up to isomorphism.
//!
//! The canonical layout of a circuit lists `in(1..m)`, then the internal gates
//! grouped as `and`, `or`, `not`, `fork`, then `out(1..n)`, with the edge list
//! sorted. Among the orderings inside each gate group the one with the
//! lexicographically least edge list is canonical. Two circuits are the same
//! up to renaming internal vertices iff their canonical keys agree.

use std::collections::HashSet;

use crate::circuit::{Circuit, Gate};

use super::InverseError;

/// Largest `max_size` accepted by [`enumerate_circuits`].
pub const MAX_ENUMERATION_SIZE: usize = 14;

/// Gate labels of the canonical layout followed by its flattened edge list.
pub type CanonicalKey = Vec<u16>;

/// Internal gates beyond this many are not canonicalized.
const MAX_CANONICAL_INTERNAL: usize = 10;

fn kind_rank(g: Gate) -> u16 {
    match g {
        Gate::And => 0,
        Gate::Or => 1,
        Gate::Not => 2,
        Gate::Fork => 3,
        Gate::Input(i) => 3 + i as u16,
        Gate::Output(j) => 1000 + j as u16,
    }
}

fn layout_class(g: Gate) -> u8 {
    match g {
        Gate::Input(_) => 0,
        Gate::Output(_) => 2,
        _ => 1,
    }
}

/// The canonical layout and key of a valid circuit, or `None` when it has more
/// than ten internal gates.
pub fn canonical_form(c: &Circuit) -> Option<(Circuit, CanonicalKey)> {
    let gates = c.gates();
    let mut order: Vec<usize> = (0..gates.len()).collect();
    order.sort_by_key(|&v| (layout_class(gates[v]), kind_rank(gates[v])));
    let internal: Vec<usize> = order.iter().copied().filter(|&v| gates[v].is_internal()).collect();
    if internal.len() > MAX_CANONICAL_INTERNAL {
        return None;
    }
    let m = c.inputs();

    // Groups of interchangeable positions within `order`.
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut start = m;
    while start < m + internal.len() {
        let kind = gates[order[start]];
        let mut end = start;
        while end < m + internal.len() && gates[order[end]] == kind {
            end += 1;
        }
        groups.push((start, end));
        start = end;
    }

    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut best_order = order.clone();
    let mut pos = vec![0usize; gates.len()];
    let mut visit = |order: &[usize]| {
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let mut edges: Vec<(usize, usize)> = c.edges().iter().map(|&(s, d)| (pos[s], pos[d])).collect();
        edges.sort_unstable();
        if best.as_ref().is_none_or(|b| edges < *b) {
            best = Some(edges);
            best_order = order.to_vec();
        }
    };
    permute_groups(&mut order, &groups, &mut visit);

    let edges = best.expect("at least one ordering");
    let new_gates: Vec<Gate> = best_order.iter().map(|&v| gates[v]).collect();
    let mut key: CanonicalKey = new_gates.iter().map(|&g| kind_rank(g)).collect();
    key.extend(edges.iter().flat_map(|&(s, d)| [s as u16, d as u16]));
    Some((Circuit::from_parts(m, c.outputs(), new_gates, edges), key))
}

/// Calls `visit` once for every ordering obtained by permuting each group.
fn permute_groups(order: &mut [usize], groups: &[(usize, usize)], visit: &mut impl FnMut(&[usize])) {
    match groups.split_first() {
        None => visit(order),
        Some((&(lo, hi), rest)) => permute_range(order, lo, hi, &mut |o| permute_groups(o, rest, visit)),
    }
}

fn permute_range(order: &mut [usize], lo: usize, hi: usize, visit: &mut dyn FnMut(&mut [usize])) {
    if hi - lo <= 1 {
        visit(order);
        return;
    }
    for i in lo..hi {
        order.swap(lo, i);
        permute_range(order, lo + 1, hi, visit);
        order.swap(lo, i);
    }
}

/// Compact text form of the canonical layout, e.g. `in1.not.out1/0-1.1-2`.
pub fn canonical_id(c: &Circuit) -> Option<String> {
    let (canon, _) = canonical_form(c)?;
    let gates: Vec<String> = canon.gates().iter().map(|g| g.to_string()).collect();
    let edges: Vec<String> = canon.edges().iter().map(|(s, d)| format!("{s}-{d}")).collect();
    Some(format!("{}/{}", gates.join("."), edges.join(".")))
}

/// Every valid circuit with `m` inputs, `n` outputs and size at most
/// `max_size`, one per isomorphism class, in canonical layout, ordered by
/// size and then canonical key.
pub fn enumerate_circuits(m: usize, n: usize, max_size: usize) -> Result<Vec<Circuit>, InverseError> {
    if m == 0 || n == 0 {
        return Err(InverseError::Interface { m, n });
    }
    if max_size > MAX_ENUMERATION_SIZE {
        return Err(InverseError::SizeLimit {
            size: max_size,
            limit: MAX_ENUMERATION_SIZE,
        });
    }
    let mut g = Generator {
        m,
        n,
        max_size,
        gates: (1..=m).map(Gate::Input).collect(),
        edges: Vec::new(),
        free: vec![1; m],
        size: m,
        seen: HashSet::new(),
        found: Vec::new(),
    };
    g.grow();
    let mut found = g.found;
    found.sort_by(|a, b| (a.0.size(), &a.1).cmp(&(b.0.size(), &b.1)));
    Ok(found.into_iter().map(|(c, _)| c).collect())
}

/// Builds circuits in the layout inputs, internal gates in topological order,
/// outputs. `free[v]` counts the unused out-ports of vertex `v`; ports of
/// internal gates must all be used, ports of inputs may stay open.
struct Generator {
    m: usize,
    n: usize,
    max_size: usize,
    gates: Vec<Gate>,
    edges: Vec<(usize, usize)>,
    free: Vec<u8>,
    size: usize,
    seen: HashSet<CanonicalKey>,
    found: Vec<(Circuit, CanonicalKey)>,
}

impl Generator {
    fn mandatory(&self) -> usize {
        self.free[self.m..].iter().map(|&f| f as usize).sum()
    }

    /// Lower bound on the final size: outputs cost 2 each, and every mandatory
    /// port beyond `n` needs an `and`/`or` (cost 3) to be merged away.
    fn feasible(&self) -> bool {
        let excess = self.mandatory().saturating_sub(self.n);
        self.size + 3 * excess + 2 * self.n <= self.max_size
    }

    fn grow(&mut self) {
        if self.mandatory() <= self.n {
            self.place_outputs();
        }
        let nv = self.gates.len();
        for gate in [Gate::And, Gate::Or, Gate::Not, Gate::Fork] {
            let cost = 1 + gate.in_degree();
            if self.size + cost + 2 * self.n > self.max_size {
                continue;
            }
            let out = if gate == Gate::Fork { 2 } else { 1 };
            if gate.in_degree() == 1 {
                for u in 0..nv {
                    if self.free[u] > 0 {
                        self.push(gate, &[u], out);
                    }
                }
            } else {
                for u in 0..nv {
                    for v in u..nv {
                        let ok = if u == v { self.free[u] >= 2 } else { self.free[u] > 0 && self.free[v] > 0 };
                        if ok {
                            self.push(gate, &[u, v], out);
                        }
                    }
                }
            }
        }
    }

    fn push(&mut self, gate: Gate, sources: &[usize], out: u8) {
        let v = self.gates.len();
        for &s in sources {
            self.free[s] -= 1;
            self.edges.push((s, v));
        }
        self.gates.push(gate);
        self.free.push(out);
        self.size += 1 + sources.len();
        if self.feasible() {
            self.grow();
        }
        self.size -= 1 + sources.len();
        self.free.pop();
        self.gates.pop();
        for &s in sources.iter().rev() {
            self.edges.pop();
            self.free[s] += 1;
        }
    }

    fn place_outputs(&mut self) {
        if self.size + 2 * self.n > self.max_size {
            return;
        }
        let mut free = self.free.clone();
        let mut chosen = Vec::with_capacity(self.n);
        self.assign(&mut free, &mut chosen);
    }

    /// Chooses the source of each output in turn; every mandatory port must end up used.
    fn assign(&mut self, free: &mut Vec<u8>, chosen: &mut Vec<usize>) {
        let left = self.n - chosen.len();
        let mandatory: usize = free[self.m..].iter().map(|&f| f as usize).sum();
        if mandatory > left {
            return;
        }
        if left == 0 {
            self.emit(chosen);
            return;
        }
        for u in 0..free.len() {
            if free[u] > 0 {
                free[u] -= 1;
                chosen.push(u);
                self.assign(free, chosen);
                chosen.pop();
                free[u] += 1;
            }
        }
    }

    fn emit(&mut self, sources: &[usize]) {
        let mut gates = self.gates.clone();
        let mut edges = self.edges.clone();
        for (j, &s) in sources.iter().enumerate() {
            edges.push((s, gates.len()));
            gates.push(Gate::Output(j + 1));
        }
        let c = Circuit::from_parts(self.m, self.n, gates, edges);
        debug_assert!(c.validate().is_ok(), "{c:?}: {}", c.validate());
        let (canon, key) = canonical_form(&c).expect("enumerated circuits are small");
        if self.seen.insert(key.clone()) {
            self.found.push((canon, key));
        }
    }
}
