use serde::Serialize;

use crate::error::{Error, ParamError, Result};
use crate::exactnum::ExactRational;
use crate::expectation::{self, Validity};
use crate::generators::generate;
use crate::oracle::count::Counter;
use crate::oracle::{Caps, HARD_MAX_M};
use crate::par;
use crate::params::ParameterSet;
use crate::sampling::SeededRng;

/// Largest acceptable `|z|` against the closed form.
pub const Z_THRESHOLD: f64 = 4.0;

pub const MIN_SAMPLES: u64 = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub params: ParameterSet,
    pub samples: u64,
    pub seed: u64,
    /// Exact sample mean of the solution counts.
    pub mean: ExactRational,
    /// Unbiased sample variance.
    pub variance_estimate: ExactRational,
    /// Closed-form value, when one exists for these parameters.
    pub exact_reference: Option<ExactRational>,
    pub z_score: Option<f64>,
    pub pass: Option<bool>,
}

/// Draws `samples` instances from the generator and counts the solutions
/// of each. Sample `i` uses its own stream derived from `(seed, i)`, so the
/// result does not depend on thread count.
pub fn monte_carlo_expectation(
    params: &ParameterSet,
    samples: u64,
    seed: u64,
    caps: &Caps,
) -> Result<MonteCarloReport> {
    if samples < MIN_SAMPLES {
        return Err(ParamError::TooSmall {
            name: "samples",
            min: MIN_SAMPLES,
            value: samples,
        }
        .into());
    }
    let p = ParameterSet::new(params.variant, params.q, params.ell, params.m, params.n)?;
    p.require_prime()?;
    let cap = caps.max_m.min(HARD_MAX_M);
    if p.m > cap {
        return Err(Error::CapExceeded {
            what: "Monte Carlo solution counting",
            size: format!("m = {}", p.m),
            cap: format!("m <= {cap}"),
        });
    }
    let exact_reference = match expectation::evaluate(&p, Validity::Strict) {
        Ok(r) => Some(r.exact),
        Err(Error::Param(ParamError::Multidimensional { .. })) => None,
        Err(e) => return Err(e),
    };

    let counts = par::map_indexed(samples as usize, |i| -> Result<u64> {
        let mut rng = SeededRng::derive(seed, i as u64);
        let inst = generate(&p, &mut rng)?;
        Ok(Counter::new(inst.a(), inst.b(), &inst.c()).count())
    });
    let (mut sum, mut sum_sq) = (0u128, 0u128);
    for c in counts {
        let c = u128::from(c?);
        sum += c;
        sum_sq += c * c;
    }
    let k = u128::from(samples);
    let mean = ExactRational::new(sum, k);
    // (k * sum_sq - sum^2) / (k (k - 1))
    let variance_estimate = ExactRational::new(k * sum_sq - sum * sum, k * (k - 1));

    let z_score = exact_reference.as_ref().map(|exact| {
        let diff = (&mean - exact).to_f64();
        let se = (variance_estimate.to_f64() / samples as f64).sqrt();
        if se > 0.0 {
            diff / se
        } else if &mean == exact {
            0.0
        } else {
            f64::INFINITY.copysign(diff)
        }
    });
    Ok(MonteCarloReport {
        params: p,
        samples,
        seed,
        mean,
        variance_estimate,
        exact_reference,
        pass: z_score.map(|z| z.abs() <= Z_THRESHOLD),
        z_score,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Variant;

    #[test]
    fn rejects_few_samples() {
        let p = ParameterSet::new(Variant::Ipkp, 5, 1, 3, 1).unwrap();
        assert!(monte_carlo_expectation(&p, 99, 1, &Caps::default()).is_err());
    }

    #[test]
    fn reproducible_and_close() {
        let p = ParameterSet::new(Variant::Pkp, 5, 1, 3, 1).unwrap();
        let a = monte_carlo_expectation(&p, 2000, 7, &Caps::default()).unwrap();
        let b = monte_carlo_expectation(&p, 2000, 7, &Caps::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.pass.unwrap(), "z = {:?}", a.z_score);
    }

    #[test]
    fn no_reference_without_closed_form() {
        let p = ParameterSet::new(Variant::Pkp, 3, 1, 4, 2).unwrap();
        let r = monte_carlo_expectation(&p, 200, 3, &Caps::default()).unwrap();
        assert!(r.exact_reference.is_none() && r.pass.is_none());
    }
}
