//! Smallest circuits computing a semi-inverse, found by exhaustive search, and
//! profiles of how large those inverses are relative to the circuits.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bits::BitString;
use crate::circuit::{Cap, Circuit};
use crate::table::FunctionTable;

use super::enumerate::{canonical_id, enumerate_circuits};
use super::{is_right_inverse, is_semi_inverse, mutualize, InverseError};

/// Function table indexed by the input read as a big-endian number.
fn dense_table(c: &Circuit) -> Vec<u32> {
    let ev = c.evaluator().expect("enumerated and checked circuits are valid");
    BitString::all(c.inputs())
        .map(|x| ev.eval(&x).expect("arity matches").to_index() as u32)
        .collect()
}

/// The candidate inverse circuits for one interface, with their tables.
pub struct InverseSearch {
    m: usize,
    n: usize,
    candidates: Vec<Circuit>,
    tables: Vec<Vec<u32>>,
}

impl InverseSearch {
    /// Candidates for inverting `m -> n` circuits: all `n -> m` circuits of
    /// size at most `size_cap`, in search order.
    pub fn new(m: usize, n: usize, size_cap: usize, cap: Cap) -> Result<InverseSearch, InverseError> {
        cap.check("input count", m)?;
        cap.check("output count", n)?;
        let candidates = enumerate_circuits(n, m, size_cap)?;
        let tables = candidates.par_iter().map(dense_table).collect();
        Ok(InverseSearch {
            m,
            n,
            candidates,
            tables,
        })
    }

    pub fn candidates(&self) -> &[Circuit] {
        &self.candidates
    }

    /// The first candidate that is a semi-inverse of `c`.
    pub fn find(&self, c: &Circuit) -> Result<Option<&Circuit>, InverseError> {
        if (c.inputs(), c.outputs()) != (self.m, self.n) {
            return Err(InverseError::Interface {
                m: c.inputs(),
                n: c.outputs(),
            });
        }
        let f = dense_table(c);
        let hit = self
            .tables
            .par_iter()
            .position_first(|g| f.iter().all(|&y| f[g[y as usize] as usize] == y));
        Ok(hit.map(|i| &self.candidates[i]))
    }
}

/// The smallest circuit `C'` (ties broken by canonical order) with
/// `C ∘ C' ∘ C = C`, searched among circuits of size at most `size_cap`.
pub fn min_inverse_circuit(c: &Circuit, size_cap: usize, cap: Cap) -> Result<Option<(Circuit, usize)>, InverseError> {
    let search = InverseSearch::new(c.inputs(), c.outputs(), size_cap, cap)?;
    Ok(search.find(c)?.map(|g| (g.clone(), g.size())))
}

#[derive(Clone, Debug)]
pub struct ProfileRecord {
    pub circuit: Circuit,
    pub canonical_id: String,
    pub size: usize,
    pub min_inverse: Option<Circuit>,
    pub is_surjective: bool,
    pub is_injective: bool,
    /// The found inverse passes the table-level semi-inverse check.
    pub verified: bool,
    /// For surjective circuits: the found inverse is total and injective, and
    /// mutualizing it yields a right inverse.
    pub surjective_check: Option<bool>,
}

impl ProfileRecord {
    pub fn min_inverse_size(&self) -> Option<usize> {
        self.min_inverse.as_ref().map(Circuit::size)
    }
}

#[derive(Clone, Debug)]
pub struct HardnessProfile {
    pub m: usize,
    pub n: usize,
    pub circuit_size_cap: usize,
    pub inverse_size_cap: usize,
    pub records: Vec<ProfileRecord>,
}

impl HardnessProfile {
    /// Largest `min_inverse_size / size` over circuits with a found inverse.
    pub fn worst_ratio(&self) -> Option<f64> {
        self.records
            .iter()
            .filter_map(|r| r.min_inverse_size().map(|s| s as f64 / r.size as f64))
            .max_by(f64::total_cmp)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,circuit_size,circuit_canonical_id,min_inverse_size,is_surjective,is_injective\n");
        for r in &self.records {
            let inv = r.min_inverse_size().map(|s| s.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.m, self.n, r.size, r.canonical_id, inv, r.is_surjective, r.is_injective
            )
            .expect("writing to a String");
        }
        out
    }
}

/// Minimal inverses for every `m -> n` circuit of size at most
/// `circuit_size_cap`, using `jobs` worker threads. The result does not
/// depend on `jobs`.
pub fn hardness_profile(
    m: usize,
    n: usize,
    circuit_size_cap: usize,
    inverse_size_cap: usize,
    cap: Cap,
    jobs: usize,
) -> Result<HardnessProfile, InverseError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        let circuits = enumerate_circuits(m, n, circuit_size_cap)?;
        let search = InverseSearch::new(m, n, inverse_size_cap, cap)?;
        let records = circuits
            .par_iter()
            .map(|c| profile_one(c, &search, cap))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HardnessProfile {
            m,
            n,
            circuit_size_cap,
            inverse_size_cap,
            records,
        })
    })
}

fn profile_one(c: &Circuit, search: &InverseSearch, cap: Cap) -> Result<ProfileRecord, InverseError> {
    let f: FunctionTable = c.function_table(cap)?;
    let is_surjective = f.is_surjective();
    let is_injective = f.is_injective();
    let min_inverse = search.find(c)?.cloned();
    let (verified, surjective_check) = match &min_inverse {
        Some(inv) => {
            let g = inv.function_table(cap)?;
            let verified = is_semi_inverse(&f, &g)?;
            let check = if is_surjective {
                Some(verified && g.is_total() && g.is_injective() && is_right_inverse(&f, &mutualize(&f, &g)?)?)
            } else {
                None
            };
            (verified, check)
        }
        None => (false, None),
    };
    Ok(ProfileRecord {
        canonical_id: canonical_id(c).expect("enumerated circuits are small"),
        size: c.size(),
        circuit: c.clone(),
        min_inverse,
        is_surjective,
        is_injective,
        verified,
        surjective_check,
    })
}
