use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, ParamError, Result};
use crate::exactnum;
use crate::gfp::Fq;
use crate::linalg::Permutation;
use crate::oracle::Caps;

/// Number of pairs `(lambda, x)` with `lambda` in `F_q^*`, `x != 0` and
/// `P_sigma x = lambda x`, found by trying every pair. With `star`, only
/// vectors with pairwise distinct nonzero entries are tried. Each
/// eigenvector has a single eigenvalue, so this is the eigenvector count.
pub fn brute_e_sigma(sigma: &Permutation, q: u64, star: bool, caps: &Caps) -> Result<u64> {
    let field = Fq::new(q)?;
    let m = sigma.len();
    let space = q.checked_pow(m as u32).filter(|&s| s <= caps.max_vectors);
    let Some(space) = space else {
        return Err(Error::CapExceeded {
            what: "eigenvector enumeration",
            size: format!("{q}^{m}"),
            cap: caps.max_vectors.to_string(),
        });
    };
    let mut x = vec![0u32; m];
    let mut count = 0;
    for code in 1..space {
        let mut c = code;
        for slot in x.iter_mut() {
            *slot = (c % q) as u32;
            c /= q;
        }
        if star && !distinct_nonzero(&x) {
            continue;
        }
        for lambda in field.nonzero() {
            // (P_sigma x)_i = x_sigma(i)
            if (0..m).all(|i| x[sigma.apply(i)] == field.mul(lambda, x[i])) {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn distinct_nonzero(x: &[u32]) -> bool {
    x.iter().enumerate().all(|(i, &v)| v != 0 && !x[..i].contains(&v))
}

/// Compares `sum over S_m of q^(number of cycles with length divisible by d)`
/// against `m! C(floor((q+m-1)/d), floor(m/d))`. Requires `d | q - 1`.
pub fn check_cycle_identity(m: u32, q: u64, d: u64, caps: &Caps) -> Result<bool> {
    if q < 2 || d == 0 || !(q - 1).is_multiple_of(d) {
        return Err(ParamError::constraint("d | q - 1", format!("d = {d}, q = {q}")).into());
    }
    if m > caps.max_cycle_m {
        return Err(Error::CapExceeded {
            what: "cycle identity enumeration",
            size: format!("m = {m}"),
            cap: format!("m <= {}", caps.max_cycle_m),
        });
    }
    let mut lhs = BigUint::zero();
    for sigma in Permutation::all(m as usize) {
        let divisible = sigma.cycle_type().iter().filter(|&&len| (len as u64).is_multiple_of(d)).count();
        lhs += exactnum::pow(q, divisible as u64);
    }
    let m64 = u64::from(m);
    let rhs = exactnum::factorial(m) * exactnum::binomial((q + m64 - 1) / d, m64 / d);
    Ok(lhs == rhs)
}
