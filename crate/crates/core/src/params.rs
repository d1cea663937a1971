//! Problem parameters `(q, ell, m, n)` and the four problem variants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ParamError;
use crate::exactnum;

/// Which generator produced an instance.
///
/// `Ipkp`/`Pkp` draw `B` from all full-rank `m x n` matrices; the `Star`
/// variants additionally require `m` pairwise distinct nonzero rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Ipkp,
    IpkpStar,
    Pkp,
    PkpStar,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Ipkp,
        Variant::IpkpStar,
        Variant::Pkp,
        Variant::PkpStar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Ipkp => "ipkp",
            Variant::IpkpStar => "ipkp_star",
            Variant::Pkp => "pkp",
            Variant::PkpStar => "pkp_star",
        }
    }

    /// Homogeneous variants have `C = 0`.
    pub fn is_homogeneous(self) -> bool {
        matches!(self, Variant::Pkp | Variant::PkpStar)
    }

    pub fn is_star(self) -> bool {
        matches!(self, Variant::IpkpStar | Variant::PkpStar)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| format!("unknown variant `{s}` (expected ipkp, ipkp_star, pkp or pkp_star)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParameterSet {
    pub variant: Variant,
    pub q: u64,
    pub ell: u32,
    pub m: u32,
    pub n: u32,
}

impl ParameterSet {
    /// Validated parameters: positivity plus every constraint of `variant`.
    /// Primality of `q` is checked separately, see [`ParameterSet::require_prime`].
    pub fn new(variant: Variant, q: u64, ell: u32, m: u32, n: u32) -> Result<Self, ParamError> {
        let p = Self::lenient(variant, q, ell, m, n)?;
        match p.violations().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(p),
        }
    }

    /// Only checks `q >= 2` and `ell, m, n >= 1`, for exploratory formula
    /// evaluation outside the variant's constraints.
    pub fn lenient(variant: Variant, q: u64, ell: u32, m: u32, n: u32) -> Result<Self, ParamError> {
        let too_small = |name, min, value| ParamError::TooSmall { name, min, value };
        if q < 2 {
            return Err(too_small("q", 2, q));
        }
        for (name, v) in [("ell", ell), ("m", m), ("n", n)] {
            if v < 1 {
                return Err(too_small(name, 1, v.into()));
            }
        }
        Ok(ParameterSet { variant, q, ell, m, n })
    }

    /// Every violated variant constraint, in a fixed order.
    pub fn violations(&self) -> Vec<ParamError> {
        let ParameterSet { variant, q, ell, m, n } = *self;
        let mut out = Vec::new();
        if variant.is_homogeneous() {
            if u64::from(ell) + u64::from(n) > u64::from(m) {
                out.push(ParamError::constraint(
                    "ell + n <= m",
                    format!("ell = {ell}, n = {n}, m = {m}"),
                ));
            }
        } else if ell.max(n) > m {
            out.push(ParamError::constraint(
                "max(ell, n) <= m",
                format!("ell = {ell}, n = {n}, m = {m}"),
            ));
        }
        if variant.is_star() && !(n <= m && star_rows_exist(q, m, n)) {
            out.push(ParamError::constraint(
                "n <= m < q^n",
                format!("q = {q}, m = {m}, n = {n}"),
            ));
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// Samplers and enumerators need a prime field of at most 2^31 elements.
    pub fn require_prime(&self) -> Result<(), ParamError> {
        require_prime(self.q)
    }
}

pub(crate) fn require_prime(q: u64) -> Result<(), ParamError> {
    if q > exactnum::MAX_Q {
        Err(ParamError::QTooLarge(q))
    } else if !exactnum::is_prime(q) {
        Err(ParamError::NotPrime(q))
    } else {
        Ok(())
    }
}

/// `m < q^n` without overflow.
fn star_rows_exist(q: u64, m: u32, n: u32) -> bool {
    match u128::from(q).checked_pow(n) {
        Some(qn) => u128::from(m) < qn,
        None => true,
    }
}

impl fmt::Display for ParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} q={} ell={} m={} n={}",
            self.variant, self.q, self.ell, self.m, self.n
        )
    }
}
