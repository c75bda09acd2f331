//! Logit choice maps between score space and the simplex.

/// Scores whose magnitude exceeds this are clamped before exponentiation
/// would ever see them; `exp(700)` is near the top of the f64 range.
pub const Z_MAX: f64 = 700.0;

/// Logit choice over a full score vector: `x_a ∝ exp(lambda * y_a)`.
///
/// The maximum score is subtracted before exponentiating so arbitrarily
/// large scores stay finite.
pub fn gibbs(lambda: f64, scores: &[f64]) -> Vec<f64> {
    assert!(!scores.is_empty());
    let top = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = scores.iter().map(|&y| (lambda * (y - top)).exp()).collect();
    let z: f64 = out.iter().sum();
    for w in &mut out {
        *w /= z;
    }
    out
}

/// Inverse of [`gibbs`] in the gauge where the scores are `ln(x)/lambda`.
///
/// Any constant shift of the scores maps to the same point, so this picks
/// the representative with `sum_a exp(lambda * y_a) = 1`. Weights must be
/// strictly positive.
pub fn gibbs_inverse(lambda: f64, weights: &[f64]) -> crate::Result<Vec<f64>> {
    if weights.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
        return Err(crate::Error::Domain(
            "logit scores exist only for strictly positive weights".into(),
        ));
    }
    Ok(weights.iter().map(|w| w.ln() / lambda).collect())
}

/// Choice map over scores relative to a reference action.
///
/// `rel` holds the score differences of the non-reference actions against
/// the reference. Returns the full weight vector with the reference action
/// first: `x_ref = 1 / (1 + sum exp(rel))`, `x_m = exp(rel_m) * x_ref`.
pub fn reduced_gibbs(rel: &[f64]) -> Vec<f64> {
    reduced_gibbs_scaled(1.0, rel)
}

/// [`reduced_gibbs`] applied to `lambda * rel`, fused so the overflow
/// shift sees the scaled values.
pub fn reduced_gibbs_scaled(lambda: f64, rel: &[f64]) -> Vec<f64> {
    let mut top = 0.0_f64;
    for &z in rel {
        top = top.max(lambda * z);
    }
    let base = (-top).exp();
    let mut out = Vec::with_capacity(rel.len() + 1);
    out.push(base);
    let mut z_sum = base;
    for &z in rel {
        let w = (lambda * z - top).exp();
        out.push(w);
        z_sum += w;
    }
    for w in &mut out {
        *w /= z_sum;
    }
    out
}

/// Inverse of [`reduced_gibbs`]: relative scores `ln(x_m / x_ref)` for the
/// non-reference entries, clamped to `[-Z_MAX, Z_MAX]`.
pub fn reduced_gibbs_inverse(weights: &[f64]) -> crate::Result<Vec<f64>> {
    if weights.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
        return Err(crate::Error::Domain(
            "relative scores exist only for strictly positive weights".into(),
        ));
    }
    let base = weights[0];
    Ok(weights[1..]
        .iter()
        .map(|w| (w.ln() - base.ln()).clamp(-Z_MAX, Z_MAX))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gibbs_is_a_distribution() {
        let x = gibbs(2.0, &[1.0, -0.5, 3.0]);
        assert_abs_diff_eq!(x.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        assert!(x.iter().all(|&w| w > 0.0 && w < 1.0));
        assert!(x[2] > x[0] && x[0] > x[1]);
    }

    #[test]
    fn gibbs_ignores_common_shifts() {
        let y = [1.2, -0.7, 0.3];
        let shifted: Vec<f64> = y.iter().map(|v| v + 1000.0).collect();
        let a = gibbs(1.5, &y);
        let b = gibbs(1.5, &shifted);
        for (p, q) in a.iter().zip(&b) {
            assert_abs_diff_eq!(p, q, epsilon = 1e-12);
        }
    }

    #[test]
    fn gibbs_survives_huge_scores() {
        let x = gibbs(1.0, &[800.0, -800.0, 0.0]);
        assert!(x.iter().all(|w| w.is_finite()));
        assert_abs_diff_eq!(x.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn reduced_matches_full_map_with_reference_pinned_at_zero() {
        let rel = [0.7, -1.3, 2.0];
        let full = gibbs(1.0, &[0.0, 0.7, -1.3, 2.0]);
        let red = reduced_gibbs(&rel);
        for (p, q) in full.iter().zip(&red) {
            assert_abs_diff_eq!(p, q, epsilon = 1e-15);
        }
    }

    #[test]
    fn reduced_gibbs_known_values() {
        let x = reduced_gibbs(&[0.0]);
        assert_abs_diff_eq!(x[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 0.5, epsilon = 1e-15);

        let t = 2.0;
        let x = reduced_gibbs(&[-t]);
        assert_abs_diff_eq!(x[0], 1.0 / (1.0 + (-t).exp()), epsilon = 1e-15);
    }

    #[test]
    fn inverses_round_trip() {
        let w = [0.2, 0.5, 0.3];
        let y = gibbs_inverse(2.5, &w).unwrap();
        let back = gibbs(2.5, &y);
        for (p, q) in w.iter().zip(&back) {
            assert_abs_diff_eq!(p, q, epsilon = 1e-12);
        }

        let z = reduced_gibbs_inverse(&w).unwrap();
        let back = reduced_gibbs(&z);
        for (p, q) in w.iter().zip(&back) {
            assert_abs_diff_eq!(p, q, epsilon = 1e-12);
        }
    }

    #[test]
    fn inverse_rejects_boundary_weights() {
        assert!(gibbs_inverse(1.0, &[0.0, 1.0]).is_err());
        assert!(reduced_gibbs_inverse(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn scaled_reduction_is_scale_of_argument() {
        let rel = [0.4, -0.9];
        let a = reduced_gibbs_scaled(3.0, &rel);
        let scaled: Vec<f64> = rel.iter().map(|z| 3.0 * z).collect();
        let b = reduced_gibbs(&scaled);
        for (p, q) in a.iter().zip(&b) {
            assert_abs_diff_eq!(p, q, epsilon = 1e-15);
        }
    }
}
