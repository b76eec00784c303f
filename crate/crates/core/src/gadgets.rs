//! The two reduction gadgets, built from their closed boolean forms.
//!
//! `F_B` on `n + 1` inputs: `out_i = x_i | !(B(x) | x_{n+1})` for every `i`.
//! It is the identity exactly when `B` is a tautology.
//!
//! `C_B` on inputs `(x, y, y_{n+1})`: `out_i = y_i | !(B(x, y) | y_{n+1})` for
//! `i <= n` and `out_{n+1} = y_{n+1} | !B(x, y)`. Its image is
//! `{0,1}^n 1 ∪ {y : ∃x B(x, y)} 0`.

use crate::builder::{CircuitBuilder, Wire};
use crate::circuit::{Cap, Circuit};
use crate::formula::{Formula, FormulaError};

/// `F_B` for a formula over `n >= 1` variables.
pub fn injectivity_gadget(b: &Formula, cap: Cap) -> Result<Circuit, FormulaError> {
    let n = b.var_count();
    if n == 0 {
        return Err(FormulaError::NoVariables);
    }
    check_cap(n + 1, cap)?;
    let mut cb = CircuitBuilder::new(n + 1);
    let xs: Vec<Wire> = (1..=n + 1).map(|i| cb.input(i)).collect();
    let t = b.compile_into(&mut cb, &xs[..n]);
    let t_or = cb.or(t, xs[n]);
    let s = cb.not(t_or);
    for &x in &xs {
        let o = cb.or(x, s);
        cb.output(o);
    }
    Ok(cb.build().expect("gadget uses every gate"))
}

/// `C_B` with the `x` block `x_vars` and the `y` block `y_vars`, both non-empty
/// and together partitioning the variables of `b`. Block order is kept.
pub fn surjectivity_gadget(b: &Formula, x_vars: &[usize], y_vars: &[usize], cap: Cap) -> Result<Circuit, FormulaError> {
    b.check_partition(x_vars, y_vars)?;
    if x_vars.is_empty() || y_vars.is_empty() {
        return Err(FormulaError::Partition("both blocks must be non-empty".into()));
    }
    let (m, n) = (x_vars.len(), y_vars.len());
    check_cap(m + n + 1, cap)?;
    let mut cb = CircuitBuilder::new(m + n + 1);
    let mut vars = vec![None; b.var_count()];
    for (k, &v) in x_vars.iter().chain(y_vars).enumerate() {
        vars[v] = Some(cb.input(k + 1));
    }
    let vars: Vec<Wire> = vars.into_iter().map(|w| w.expect("partition covers every variable")).collect();
    let last = cb.input(m + n + 1);

    let t = b.compile_into(&mut cb, &vars);
    let t_or = cb.or(t, last);
    let s = cb.not(t_or);
    for &v in y_vars {
        let o = cb.or(vars[v], s);
        cb.output(o);
    }
    let nt = cb.not(t);
    let o = cb.or(last, nt);
    cb.output(o);
    Ok(cb.build().expect("gadget uses every gate"))
}

fn check_cap(inputs: usize, cap: Cap) -> Result<(), FormulaError> {
    if inputs > cap.0 {
        Err(FormulaError::TooLarge { vars: inputs, cap: cap.0 })
    } else {
        Ok(())
    }
}
