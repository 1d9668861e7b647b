use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::CflParams;

/// Entrywise floor on every non-point-mass probability vector:
/// `min(a, b) / (D - 1 + a/b)`.
pub fn gamma(params: &CflParams, domain: u32) -> f64 {
    let (a, b) = (params.a(), params.b());
    a.min(b) / (f64::from(domain.max(1) - 1) + a / b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    General,
    Coloring,
}

/// Natural log of the iteration count below which a solution is found with
/// probability greater than `1 - epsilon`:
///
/// * general CSPs: `N exp(N(N+1)/2 · log(1/γ)) · log(1/ε)`
/// * graph colouring: `N exp(2N · log(1/γ)) · log(1/ε)`
///
/// The raw value overflows `f64` for modest `N`, hence the log space.
pub fn iteration_bound_log(n: usize, gamma: f64, epsilon: f64, kind: BoundKind) -> Result<f64> {
    if n == 0 {
        return Err(Error::usage("N must be at least 1"));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::usage(format!(
            "gamma must lie in (0, 1), got {gamma}"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::usage(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let nf = n as f64;
    let exponent = match kind {
        BoundKind::General => nf * (nf + 1.0) / 2.0,
        BoundKind::Coloring => 2.0 * nf,
    };
    Ok(nf.ln() + exponent * (1.0 / gamma).ln() + (1.0 / epsilon).ln().ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64) -> CflParams {
        CflParams::new(a, b).unwrap()
    }

    #[test]
    fn gamma_examples() {
        assert!((gamma(&p(0.2, 0.2), 2) - 0.1).abs() < 1e-15);
        assert!((gamma(&p(1.0, 1.0), 2) - 0.5).abs() < 1e-15);
        assert!((gamma(&p(0.1, 0.2), 11) - 0.1 / 10.5).abs() < 1e-15);
        assert!((gamma(&p(0.5, 0.5), 3) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn bound_examples() {
        let eps = (-1.0f64).exp();
        let c = iteration_bound_log(2, 0.5, eps, BoundKind::Coloring).unwrap();
        assert!((c - 32f64.ln()).abs() < 1e-12);
        let g = iteration_bound_log(1, 0.5, eps, BoundKind::General).unwrap();
        assert!((g - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn coloring_is_tighter_from_four_variables() {
        for n in 4..=64 {
            let c = iteration_bound_log(n, 0.1, 0.01, BoundKind::Coloring).unwrap();
            let g = iteration_bound_log(n, 0.1, 0.01, BoundKind::General).unwrap();
            assert!(c < g, "n = {n}");
        }
    }

    #[test]
    fn range_errors() {
        assert!(iteration_bound_log(0, 0.5, 0.5, BoundKind::General).is_err());
        assert!(iteration_bound_log(3, 1.0, 0.5, BoundKind::General).is_err());
        assert!(iteration_bound_log(3, 0.5, 0.0, BoundKind::General).is_err());
        assert!(iteration_bound_log(3, 0.5, 1.0, BoundKind::Coloring).is_err());
    }
}
