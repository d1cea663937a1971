use pkp_core::exactnum::divisors;
use pkp_core::expectation::{
    check_star_sum_bound, evaluate, prob_block_rank, sum_e_sigma, sum_e_sigma_star, Validity,
};
use pkp_core::oracle::{self, brute_e_sigma, check_cycle_identity, AEnumeration, Caps};
use pkp_core::{ExactRational, ParameterSet, Permutation, Variant};

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, outcome: Result<(bool, String), pkp_core::Error>) -> Check {
    let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Check { name: name.into(), pass, detail }
}

const TINY: &[(Variant, u64, u32, u32)] = &[
    (Variant::Ipkp, 2, 1, 2),
    (Variant::Ipkp, 2, 1, 3),
    (Variant::Ipkp, 3, 1, 2),
    (Variant::Ipkp, 3, 1, 3),
    (Variant::Ipkp, 3, 2, 3),
    (Variant::Ipkp, 5, 1, 3),
    (Variant::IpkpStar, 7, 1, 3),
    (Variant::IpkpStar, 7, 2, 3),
    (Variant::IpkpStar, 5, 1, 3),
    (Variant::Pkp, 2, 1, 2),
    (Variant::Pkp, 3, 1, 2),
    (Variant::Pkp, 3, 1, 3),
    (Variant::Pkp, 5, 1, 3),
    (Variant::PkpStar, 5, 1, 3),
    (Variant::PkpStar, 7, 1, 3),
    (Variant::PkpStar, 7, 2, 4),
];

pub fn run(samples: u64, seed: u64) -> Vec<Check> {
    let caps = Caps::default();
    let mut out = Vec::new();

    out.push(check("closed forms at large parameters", (|| {
        let perk = evaluate(&ParameterSet::new(Variant::Ipkp, 1021, 35, 79, 3)?, Validity::Strict)?;
        let dss = evaluate(&ParameterSet::new(Variant::Pkp, 251, 41, 69, 1)?, Validity::Strict)?;
        let lo = ExactRational::new(2885, 1_000_000_000u64);
        let hi = ExactRational::new(2895, 1_000_000_000u64);
        let ok = perk.exact_minus_one >= lo
            && perk.exact_minus_one <= hi
            && dss.exact.round() == 5412.into();
        Ok((ok, format!("{} / {}", perk.exact_minus_one.to_decimal(3), dss.exact.to_decimal(6))))
    })()));

    for &(variant, q, ell, m) in TINY {
        let name = format!("exhaustive = formula  {variant} q={q} ell={ell} m={m}");
        out.push(check(name, (|| {
            let p = ParameterSet::new(variant, q, ell, m, 1)?;
            let oracle = oracle::exhaustive_expectation(&p, &caps)?;
            let formula = evaluate(&p, Validity::Strict)?.exact;
            Ok((oracle == formula, oracle.to_string()))
        })()));
    }

    out.push(check("hand-checkable pkp q=2 ell=1 m=2 is 4/3", (|| {
        let p = ParameterSet::new(Variant::Pkp, 2, 1, 2, 1)?;
        let r = oracle::exhaustive_expectation_with(&p, AEnumeration::AllMatrices, &caps)?;
        Ok((r.expectation == ExactRational::new(4, 3) && r.points == 6, r.expectation.to_string()))
    })()));

    out.push(check("eigenvector sums, m <= 5", (|| {
        for q in [2u64, 3, 5, 7] {
            for m in 1..=5u32 {
                let (mut plain, mut star) = (0u64, 0u64);
                for sigma in Permutation::all(m as usize) {
                    plain += brute_e_sigma(&sigma, q, false, &caps)?;
                    if u64::from(m) < q {
                        star += brute_e_sigma(&sigma, q, true, &caps)?;
                    }
                }
                if sum_e_sigma(m, q)? != plain.into()
                    || (u64::from(m) < q && sum_e_sigma_star(m, q)? != star.into())
                {
                    return Ok((false, format!("q={q} m={m}")));
                }
            }
        }
        Ok((true, String::new()))
    })()));

    out.push(check("cycle identity, m <= 6", (|| {
        for q in [3u64, 5, 7] {
            for d in divisors(q - 1) {
                for m in 1..=6 {
                    if !check_cycle_identity(m, q, d, &caps)? {
                        return Ok((false, format!("q={q} d={d} m={m}")));
                    }
                }
            }
        }
        Ok((true, String::new()))
    })()));

    out.push(check("3 C(q-1, m) bound", (|| {
        for q in [5u64, 7, 11, 13, 101] {
            for m in 1..=(q - 2) as u32 {
                if !check_star_sum_bound(m, q)? {
                    return Ok((false, format!("q={q} m={m}")));
                }
            }
        }
        Ok((true, String::new()))
    })()));

    out.push(check("block-rank probabilities sum to 1", (|| {
        for q in [2u64, 3, 5] {
            for total in 1..=6u32 {
                for m1 in 0..=total {
                    for ell in 1..=total {
                        let mut s = ExactRational::zero();
                        for r in 0..=ell.min(m1) {
                            s = s + prob_block_rank(ell, m1, total - m1, r, q)?;
                        }
                        if s != ExactRational::one() {
                            return Ok((false, format!("q={q} ell={ell} m1={m1}")));
                        }
                    }
                }
            }
        }
        Ok((true, String::new()))
    })()));

    for (variant, q, ell, m) in [
        (Variant::Ipkp, 7, 2, 5),
        (Variant::Pkp, 5, 1, 4),
        (Variant::IpkpStar, 11, 2, 4),
        (Variant::PkpStar, 7, 1, 4),
    ] {
        let name = format!("monte carlo {variant} q={q} ell={ell} m={m}");
        out.push(check(name, (|| {
            let p = ParameterSet::new(variant, q, ell, m, 1)?;
            let r = oracle::monte_carlo_expectation(&p, samples, seed, &caps)?;
            let z = r.z_score.unwrap_or(f64::NAN);
            Ok((r.pass == Some(true), format!("z = {z:.3}")))
        })()));
    }
    out
}
