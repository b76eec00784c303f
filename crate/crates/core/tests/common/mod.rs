//! Second implementations used as oracles by the integration tests. Nothing
//! here calls into the library beyond its data types.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use circuit_forge::formula::Expr;
use circuit_forge::{BitString, Circuit, Gate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Evaluates by memoized recursion from each output back to the inputs.
pub fn oracle_eval(c: &Circuit, x: &[bool]) -> Vec<bool> {
    assert_eq!(x.len(), c.inputs());
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); c.gates().len()];
    for &(s, d) in c.edges() {
        preds[d].push(s);
    }
    let mut memo: Vec<Option<bool>> = vec![None; c.gates().len()];
    fn value(v: usize, c: &Circuit, preds: &[Vec<usize>], x: &[bool], memo: &mut [Option<bool>]) -> bool {
        if let Some(b) = memo[v] {
            return b;
        }
        let mut arg = |k: usize| value(preds[v][k], c, preds, x, memo);
        let b = match c.gates()[v] {
            Gate::Input(i) => x[i - 1],
            Gate::And => arg(0) & arg(1),
            Gate::Or => arg(0) | arg(1),
            Gate::Not => !arg(0),
            Gate::Fork | Gate::Output(_) => arg(0),
        };
        memo[v] = Some(b);
        b
    }
    let mut out = vec![false; c.outputs()];
    for (v, g) in c.gates().iter().enumerate() {
        if let Gate::Output(j) = *g {
            out[j - 1] = value(v, c, &preds, x, &mut memo);
        }
    }
    out
}

pub fn oracle_eval_bits(c: &Circuit, x: &BitString) -> BitString {
    bs(&oracle_eval(c, x.bits()))
}

pub fn bs(bits: &[bool]) -> BitString {
    let mut b = BitString::new();
    for &bit in bits {
        b.push(bit);
    }
    b
}

/// All strings of length `len`, lexicographic.
pub fn strings(len: usize) -> Vec<Vec<bool>> {
    (0..1u64 << len)
        .map(|v| (0..len).rev().map(|k| v >> k & 1 == 1).collect())
        .collect()
}

/// Checks the circuit definition directly from degree counts.
pub fn oracle_valid(c: &Circuit) -> bool {
    let (m, n, gates) = (c.inputs(), c.outputs(), c.gates());
    if m == 0 || n == 0 {
        return false;
    }
    let mut indeg = vec![0usize; gates.len()];
    let mut outdeg = vec![0usize; gates.len()];
    for &(s, d) in c.edges() {
        if s >= gates.len() || d >= gates.len() || s == d {
            return false;
        }
        outdeg[s] += 1;
        indeg[d] += 1;
    }
    let mut ins = vec![0; m];
    let mut outs = vec![0; n];
    for (v, g) in gates.iter().enumerate() {
        let ok = match *g {
            Gate::And | Gate::Or => indeg[v] == 2 && outdeg[v] == 1,
            Gate::Not => indeg[v] == 1 && outdeg[v] == 1,
            Gate::Fork => indeg[v] == 1 && outdeg[v] == 2,
            Gate::Input(i) => {
                if i == 0 || i > m {
                    return false;
                }
                ins[i - 1] += 1;
                indeg[v] == 0 && outdeg[v] <= 1
            }
            Gate::Output(j) => {
                if j == 0 || j > n {
                    return false;
                }
                outs[j - 1] += 1;
                indeg[v] == 1 && outdeg[v] == 0
            }
        };
        if !ok {
            return false;
        }
    }
    ins.iter().chain(&outs).all(|&k| k == 1) && acyclic(gates.len(), c.edges())
}

fn acyclic(v: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); v];
    for &(s, d) in edges {
        adj[s].push(d);
    }
    // 0 unvisited, 1 on stack, 2 done
    let mut state = vec![0u8; v];
    fn dfs(u: usize, adj: &[Vec<usize>], state: &mut [u8]) -> bool {
        state[u] = 1;
        for &w in &adj[u] {
            if state[w] == 1 || (state[w] == 0 && !dfs(w, adj, state)) {
                return false;
            }
        }
        state[u] = 2;
        true
    }
    (0..v).all(|u| state[u] != 0 || dfs(u, &adj, &mut state))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Isomorphism key: group sizes `(m, and, or, not, fork, n)` and the least
/// sorted edge list over relabelings within each internal group.
pub type OracleKey = (usize, [usize; 4], usize, Vec<(usize, usize)>);

pub fn oracle_key(c: &Circuit) -> OracleKey {
    let (m, n) = (c.inputs(), c.outputs());
    let kind = |g: Gate| match g {
        Gate::And => 0,
        Gate::Or => 1,
        Gate::Not => 2,
        Gate::Fork => 3,
        _ => unreachable!(),
    };
    let mut groups: [Vec<usize>; 4] = Default::default();
    for (v, &g) in c.gates().iter().enumerate() {
        if g.is_internal() {
            groups[kind(g)].push(v);
        }
    }
    let counts = [groups[0].len(), groups[1].len(), groups[2].len(), groups[3].len()];
    let internal: usize = counts.iter().sum();
    let mut base = vec![0usize; c.gates().len()];
    for (v, &g) in c.gates().iter().enumerate() {
        match g {
            Gate::Input(i) => base[v] = i - 1,
            Gate::Output(j) => base[v] = m + internal + j - 1,
            _ => {}
        }
    }
    let perms: Vec<Vec<Vec<usize>>> = counts.iter().map(|&k| permutations(k)).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut choice = [0usize; 4];
    loop {
        let mut label = base.clone();
        let mut offset = m;
        for k in 0..4 {
            for (slot, &v) in groups[k].iter().enumerate() {
                label[v] = offset + perms[k][choice[k]][slot];
            }
            offset += counts[k];
        }
        let mut e: Vec<(usize, usize)> = c.edges().iter().map(|&(s, d)| (label[s], label[d])).collect();
        e.sort();
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
        let mut k = 0;
        while k < 4 {
            choice[k] += 1;
            if choice[k] < perms[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == 4 {
            break;
        }
    }
    (m, counts, n, best.expect("at least one labeling"))
}

/// Every valid `m -> n` circuit of size at most `max_size`, one per
/// isomorphism class, built by matching source ports to sink ports.
pub fn brute_circuits(m: usize, n: usize, max_size: usize) -> BTreeMap<OracleKey, Circuit> {
    let mut found = BTreeMap::new();
    for a in 0..=max_size / 3 {
        for o in 0..=max_size / 3 {
            for nt in 0..=max_size / 2 {
                for f in 0..=max_size / 2 {
                    let vertices = m + n + a + o + nt + f;
                    let sinks = 2 * a + 2 * o + nt + f + n;
                    if vertices + sinks > max_size {
                        continue;
                    }
                    let internal_sources = a + o + nt + 2 * f;
                    if sinks < internal_sources || sinks - internal_sources > m {
                        continue;
                    }
                    let used = sinks - internal_sources;
                    let mut gates: Vec<Gate> = (1..=m).map(Gate::Input).collect();
                    gates.extend(std::iter::repeat_n(Gate::And, a));
                    gates.extend(std::iter::repeat_n(Gate::Or, o));
                    gates.extend(std::iter::repeat_n(Gate::Not, nt));
                    gates.extend(std::iter::repeat_n(Gate::Fork, f));
                    gates.extend((1..=n).map(Gate::Output));
                    for subset in subsets(m, used) {
                        match_ports(m, n, &gates, &subset, &mut found);
                    }
                }
            }
        }
    }
    found
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    (0..1u32 << m)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..m).filter(|&i| s >> i & 1 == 1).collect())
        .collect()
}

fn match_ports(m: usize, n: usize, gates: &[Gate], used_inputs: &[usize], found: &mut BTreeMap<OracleKey, Circuit>) {
    let mut supply = vec![0usize; gates.len()];
    let mut sinks = Vec::new();
    for (v, &g) in gates.iter().enumerate() {
        let (need, give) = match g {
            Gate::And | Gate::Or => (2, 1),
            Gate::Not => (1, 1),
            Gate::Fork => (1, 2),
            Gate::Input(_) => (0, 0),
            Gate::Output(_) => (1, 0),
        };
        supply[v] = give;
        sinks.extend(std::iter::repeat_n(v, need));
    }
    for &i in used_inputs {
        supply[i] = 1;
    }
    let mut edges = Vec::with_capacity(sinks.len());
    assign(0, &sinks, &mut supply, &mut edges, &mut |edges| {
        let c = Circuit::from_parts(m, n, gates.to_vec(), edges.to_vec());
        if oracle_valid(&c) {
            found.entry(oracle_key(&c)).or_insert(c);
        }
    });
}

type Emit<'a> = dyn FnMut(&[(usize, usize)]) + 'a;

fn assign(
    k: usize,
    sinks: &[usize],
    supply: &mut [usize],
    edges: &mut Vec<(usize, usize)>,
    emit: &mut Emit,
) {
    if k == sinks.len() {
        emit(edges);
        return;
    }
    for s in 0..supply.len() {
        if supply[s] == 0 || s == sinks[k] {
            continue;
        }
        supply[s] -= 1;
        edges.push((s, sinks[k]));
        assign(k + 1, sinks, supply, edges, emit);
        edges.pop();
        supply[s] += 1;
    }
}

/// The acceptance suite: canonical circuits with `m, n <= 3` and size <= 12.
pub fn suite() -> Vec<Circuit> {
    let mut all = Vec::new();
    for m in 1..=3 {
        for n in 1..=3 {
            all.extend(circuit_forge::inverse::enumerate_circuits(m, n, 12).expect("within limits"));
        }
    }
    all
}

/// Table of `c` as a map, by the oracle evaluator.
pub fn oracle_table(c: &Circuit) -> BTreeMap<Vec<bool>, Vec<bool>> {
    strings(c.inputs()).into_iter().map(|x| {
        let y = oracle_eval(c, &x);
        (x, y)
    }).collect()
}

pub fn oracle_image(c: &Circuit) -> BTreeSet<Vec<bool>> {
    oracle_table(c).into_values().collect()
}

/// `f ∘ g ∘ f = f` with `f` total and `g` total on its domain.
pub fn oracle_semi_inverse(f: &BTreeMap<Vec<bool>, Vec<bool>>, g: &BTreeMap<Vec<bool>, Vec<bool>>) -> bool {
    f.iter().all(|(_, y)| g.get(y).and_then(|x| f.get(x)) == Some(y))
}

/// A random expression over `vars` variables of depth at most `depth`.
pub fn random_expr(rng: &mut ChaCha8Rng, vars: usize, depth: usize) -> Expr {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return if rng.gen_ratio(1, 8) {
            Expr::Const(rng.gen())
        } else {
            Expr::var(rng.gen_range(0..vars))
        };
    }
    match rng.gen_range(0..3) {
        0 => Expr::not(random_expr(rng, vars, depth - 1)),
        1 => Expr::and(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1)),
        _ => Expr::or(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1)),
    }
}

/// Truth table of `e` over `vars` variables, assignments in lexicographic order.
pub fn truth_table(e: &Expr, vars: usize) -> Vec<bool> {
    strings(vars).iter().map(|a| e.eval(a)).collect()
}

/// `∀y ∃x e` by direct enumeration.
pub fn oracle_forall_exists(e: &Expr, vars: usize, x_vars: &[usize], y_vars: &[usize]) -> bool {
    strings(y_vars.len()).iter().all(|ya| {
        strings(x_vars.len()).iter().any(|xa| {
            let mut a = vec![false; vars];
            for (&v, &b) in y_vars.iter().zip(ya) {
                a[v] = b;
            }
            for (&v, &b) in x_vars.iter().zip(xa) {
                a[v] = b;
            }
            e.eval(&a)
        })
    })
}

/// Disjunctive normal form for a truth table; the empty disjunction is `0`.
pub fn dnf(table: &[bool], vars: usize) -> Expr {
    let rows = strings(vars);
    let mut terms = rows.iter().zip(table).filter(|(_, &t)| t).map(|(a, _)| {
        a.iter()
            .enumerate()
            .map(|(v, &b)| if b { Expr::var(v) } else { Expr::not(Expr::var(v)) })
            .reduce(Expr::and)
            .expect("at least one variable")
    });
    match terms.next() {
        None => Expr::Const(false),
        Some(first) => terms.fold(first, Expr::or),
    }
}

/// A random valid `m -> n` circuit: each output is a random expression of
/// depth at most `depth`, sharing inputs through fork chains.
pub fn random_circuit(rng: &mut ChaCha8Rng, m: usize, n: usize, depth: usize) -> Circuit {
    use circuit_forge::builder::CircuitBuilder;
    use circuit_forge::Formula;
    let mut b = CircuitBuilder::new(m);
    let inputs: Vec<_> = (1..=m).map(|i| b.input(i)).collect();
    for _ in 0..n {
        let f = Formula::new(random_expr(rng, m, depth), m).expect("variables in range");
        let w = f.compile_into(&mut b, &inputs);
        b.output(w);
    }
    b.build().expect("every gate feeds an output")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
