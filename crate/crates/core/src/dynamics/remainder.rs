//! The lower-derivative remainder of the n-th time derivative of `log x`.
//!
//! Writing `d^n/dt^n log x = x^(n)/x + R`, the remainder `R` collects every
//! chain-rule term that involves only derivatives of order below n. It is a
//! sum over multiplicity tuples `(m_1, ..., m_{n-1})` with
//! `sum_r r * m_r = n`:
//!
//! ```text
//! R = sum  (-1)^(m-1) * (m-1)! * n! / (m_1! ... m_{n-1}!)
//!          * (1/x^m) * prod_r (x^(r) / r!)^(m_r)
//! ```
//!
//! where `m = sum_r m_r`. For n = 1 the sum is empty. For n = 2 it is the
//! single term `-(x'/x)^2`, and each term here is evaluated as
//! `coefficient * product / x^m` with the division last, so that small-order
//! closed forms agree bit for bit with their hand-written counterparts.

/// All tuples `(m_1, ..., m_{n-1})` with `sum_r r * m_r = n`.
fn multiplicity_tuples(n: usize) -> Vec<Vec<usize>> {
    fn fill(slot: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slot == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for count in 0..=(left / slot) {
            cur[slot - 1] = count;
            fill(slot - 1, left - slot * count, cur, out);
        }
        cur[slot - 1] = 0;
    }
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut cur = vec![0usize; n - 1];
    fill(n - 1, n, &mut cur, &mut out);
    out
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Evaluates the remainder from the derivative stack
/// `derivs = [x, x', ..., x^(n-1)]`; `n = derivs.len()`.
///
/// `derivs[0]` must be nonzero. Returns 0 for n = 1.
pub fn log_derivative_remainder(derivs: &[f64]) -> f64 {
    let n = derivs.len();
    debug_assert!(n >= 1 && derivs[0] != 0.0);
    let x = derivs[0];
    let mut total = 0.0;
    for tuple in multiplicity_tuples(n) {
        let m: usize = tuple.iter().sum();
        let mut coeff = factorial(n) * factorial(m - 1);
        let mut prod = 1.0;
        for (r, &mult) in tuple.iter().enumerate().map(|(i, m)| (i + 1, m)) {
            if mult == 0 {
                continue;
            }
            coeff /= factorial(mult);
            prod *= (derivs[r] / factorial(r)).powi(mult as i32);
        }
        if m % 2 == 0 {
            coeff = -coeff;
        }
        total += coeff * prod / x.powi(m as i32);
    }
    total
}
