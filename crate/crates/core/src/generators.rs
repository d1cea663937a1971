//! The four random instance generators and the instance file format.
//!
//! * `ipkp`: `A` uniform of rank `ell`, `B` uniform of rank `n`, `pi`
//!   uniform, `C = A * Pi * B`.
//! * `pkp`: `B`, `pi` as above, then `A` uniform among rank-`ell` matrices
//!   with `A * Pi * B = 0`.
//! * `*_star`: as above with `B` restricted to pairwise distinct nonzero rows.
//!
//! The homogeneous generator draws `A` constructively: with `K` a basis of
//! the left kernel of `Pi * B` (full row rank `m - n`), `M -> M * K` is a
//! bijection from rank-`ell` matrices `M` onto the admissible `A`, so a
//! uniform full-rank `M` gives a uniform `A`. This has the same law as
//! redrawing `A` until `A * Pi * B = 0`, which would accept with
//! probability about `q^(-ell n)`.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::gfp::Fq;
use crate::linalg::{FqMatrix, Permutation};
use crate::params::{ParameterSet, Variant};
use crate::sampling::{self, SeededRng};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpkpInstance {
    pub params: ParameterSet,
    pub a: FqMatrix,
    pub b: FqMatrix,
    pub c: FqMatrix,
    pub secret: Option<Permutation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PkpInstance {
    pub params: ParameterSet,
    pub a: FqMatrix,
    pub b: FqMatrix,
    pub secret: Option<Permutation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Ipkp(IpkpInstance),
    Pkp(PkpInstance),
}

impl Instance {
    pub fn params(&self) -> &ParameterSet {
        match self {
            Instance::Ipkp(i) => &i.params,
            Instance::Pkp(i) => &i.params,
        }
    }

    pub fn a(&self) -> &FqMatrix {
        match self {
            Instance::Ipkp(i) => &i.a,
            Instance::Pkp(i) => &i.a,
        }
    }

    pub fn b(&self) -> &FqMatrix {
        match self {
            Instance::Ipkp(i) => &i.b,
            Instance::Pkp(i) => &i.b,
        }
    }

    /// Right-hand side; the zero matrix for homogeneous instances.
    pub fn c(&self) -> FqMatrix {
        match self {
            Instance::Ipkp(i) => i.c.clone(),
            Instance::Pkp(i) => FqMatrix::zeros(i.a.field(), i.a.rows(), i.b.cols()),
        }
    }

    pub fn secret(&self) -> Option<&Permutation> {
        match self {
            Instance::Ipkp(i) => i.secret.as_ref(),
            Instance::Pkp(i) => i.secret.as_ref(),
        }
    }

    pub fn without_secret(mut self) -> Self {
        match &mut self {
            Instance::Ipkp(i) => i.secret = None,
            Instance::Pkp(i) => i.secret = None,
        }
        self
    }

    /// Whether `A * Pi * B = C`.
    pub fn is_solution(&self, pi: &Permutation) -> bool {
        let pb = self.b().permute_rows(pi).expect("length checked at construction");
        self.a().mat_mul(&pb).expect("shapes checked at construction") == self.c()
    }

    /// Checks shapes, ranks and, when present, the secret.
    pub fn validate(&self) -> Result<()> {
        let p = self.params();
        let (ell, m, n) = (p.ell as usize, p.m as usize, p.n as usize);
        let shape = |name: &str, x: &FqMatrix, r: usize, c: usize| {
            if (x.rows(), x.cols()) != (r, c) {
                Err(Error::parse(
                    name,
                    format!("expected {r}x{c}, found {}x{}", x.rows(), x.cols()),
                ))
            } else if x.field().q() as u64 != p.q {
                Err(Error::parse(name, "modulus differs from q"))
            } else {
                Ok(())
            }
        };
        shape("A", self.a(), ell, m)?;
        shape("B", self.b(), m, n)?;
        if let Instance::Ipkp(i) = self {
            shape("C", &i.c, ell, n)?;
        }
        if self.a().rank() != ell {
            return Err(Error::parse("A", format!("rank must be ell = {ell}")));
        }
        if self.b().rank() != n {
            return Err(Error::parse("B", format!("rank must be n = {n}")));
        }
        if p.variant.is_star() && !rows_distinct_nonzero(self.b()) {
            return Err(Error::parse("B", "star variants need pairwise distinct nonzero rows"));
        }
        if let Some(pi) = self.secret() {
            if pi.len() != m {
                return Err(Error::parse("pi", format!("expected {m} images, found {}", pi.len())));
            }
            if !self.is_solution(pi) {
                return Err(Error::parse("pi", "secret permutation does not solve the instance"));
            }
        }
        Ok(())
    }

    /// Instance document. The secret is written only with `with_secret`.
    pub fn to_text(&self, with_secret: bool) -> String {
        let p = self.params();
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"format_version\": {FORMAT_VERSION},");
        let _ = writeln!(out, "  \"variant\": \"{}\",", p.variant);
        let _ = writeln!(out, "  \"q\": {},", p.q);
        let _ = writeln!(out, "  \"ell\": {},", p.ell);
        let _ = writeln!(out, "  \"m\": {},", p.m);
        let _ = writeln!(out, "  \"n\": {},", p.n);
        let mut fields = vec![("A", self.a().clone()), ("B", self.b().clone())];
        if let Instance::Ipkp(i) = self {
            fields.push(("C", i.c.clone()));
        }
        let secret = self.secret().filter(|_| with_secret);
        for (idx, (name, x)) in fields.iter().enumerate() {
            let _ = write!(out, "  \"{name}\": ");
            write_matrix(&mut out, x);
            let last = idx + 1 == fields.len() && secret.is_none();
            out.push_str(if last { "\n" } else { ",\n" });
        }
        if let Some(pi) = secret {
            let _ = writeln!(out, "  \"pi\": {}", json_list(&pi.to_one_indexed()));
        }
        out.push_str("}\n");
        out
    }

    pub fn from_text(text: &str) -> Result<Instance> {
        let doc: Document = serde_json::from_str(text).map_err(|e| {
            Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        doc.into_instance()
    }
}

fn json_list(xs: &[u64]) -> String {
    serde_json::to_string(xs).expect("integers serialize")
}

fn write_matrix(out: &mut String, x: &FqMatrix) {
    let rows = x.to_rows();
    if rows.is_empty() {
        out.push_str("[]");
        return;
    }
    out.push_str("[\n");
    for (i, row) in rows.iter().enumerate() {
        let sep = if i + 1 == rows.len() { "" } else { "," };
        let _ = writeln!(out, "    {}{sep}", json_list(row));
    }
    out.push_str("  ]");
}

fn rows_distinct_nonzero(b: &FqMatrix) -> bool {
    let rows = b.to_rows();
    let mut seen = std::collections::HashSet::new();
    rows.iter().all(|r| r.iter().any(|&v| v != 0) && seen.insert(r.clone()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format_version: u32,
    variant: Variant,
    q: u64,
    ell: u32,
    m: u32,
    n: u32,
    #[serde(rename = "A")]
    a: Vec<Vec<u64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<u64>>,
    #[serde(rename = "C")]
    c: Option<Vec<Vec<u64>>>,
    pi: Option<Vec<u64>>,
}

impl Document {
    fn into_instance(self) -> Result<Instance> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::parse(
                "format_version",
                format!("unsupported version {}", self.format_version),
            ));
        }
        let params = ParameterSet::new(self.variant, self.q, self.ell, self.m, self.n)
            .map_err(|e| Error::parse("parameters", e.to_string()))?;
        let field = Fq::new(self.q).map_err(|e| Error::parse("q", e.to_string()))?;
        let a = FqMatrix::from_rows(field, "A", &self.a)?;
        let b = FqMatrix::from_rows(field, "B", &self.b)?;
        let secret = self.pi.as_deref().map(Permutation::from_one_indexed).transpose()?;
        let instance = match (self.variant.is_homogeneous(), self.c) {
            (true, None) => Instance::Pkp(PkpInstance { params, a, b, secret }),
            (true, Some(c)) => {
                let c = FqMatrix::from_rows(field, "C", &c)?;
                if !c.is_zero() {
                    return Err(Error::parse("C", "homogeneous instances require C = 0"));
                }
                Instance::Pkp(PkpInstance { params, a, b, secret })
            }
            (false, Some(c)) => {
                let c = FqMatrix::from_rows(field, "C", &c)?;
                Instance::Ipkp(IpkpInstance { params, a, b, c, secret })
            }
            (false, None) => {
                return Err(Error::parse(
                    "C",
                    format!("variant {} requires C; omit C only for pkp documents", self.variant),
                ))
            }
        };
        instance.validate()?;
        Ok(instance)
    }
}

fn with_variant(params: &ParameterSet, variant: Variant) -> Result<(ParameterSet, Fq)> {
    let p = ParameterSet::new(variant, params.q, params.ell, params.m, params.n)?;
    let field = Fq::new(p.q)?;
    Ok((p, field))
}

fn sample_b(p: &ParameterSet, field: Fq, rng: &mut SeededRng) -> Result<FqMatrix> {
    let (m, n) = (p.m as usize, p.n as usize);
    if p.variant.is_star() {
        sampling::sample_distinct_nonzero_rows_full_rank(field, m, n, rng)
    } else {
        sampling::sample_full_rank(field, m, n, rng)
    }
}

fn gen_inhomogeneous(params: &ParameterSet, variant: Variant, rng: &mut SeededRng) -> Result<IpkpInstance> {
    let (p, field) = with_variant(params, variant)?;
    let a = sampling::sample_full_rank(field, p.ell as usize, p.m as usize, rng)?;
    let b = sample_b(&p, field, rng)?;
    let pi = sampling::sample_permutation(p.m as usize, rng);
    let c = a.mat_mul(&b.permute_rows(&pi)?)?;
    Ok(IpkpInstance { params: p, a, b, c, secret: Some(pi) })
}

fn gen_homogeneous(params: &ParameterSet, variant: Variant, rng: &mut SeededRng) -> Result<PkpInstance> {
    let (p, field) = with_variant(params, variant)?;
    let b = sample_b(&p, field, rng)?;
    let pi = sampling::sample_permutation(p.m as usize, rng);
    let kernel = b.permute_rows(&pi)?.left_kernel_basis();
    if kernel.rows() != (p.m - p.n) as usize {
        return Err(Error::Internal("left kernel of Pi*B has unexpected dimension".into()));
    }
    let coeffs = sampling::sample_full_rank(field, p.ell as usize, kernel.rows(), rng)?;
    let a = coeffs.mat_mul(&kernel)?;
    Ok(PkpInstance { params: p, a, b, secret: Some(pi) })
}

pub fn gen_ipkp(params: &ParameterSet, rng: &mut SeededRng) -> Result<IpkpInstance> {
    gen_inhomogeneous(params, Variant::Ipkp, rng)
}

pub fn gen_ipkp_star(params: &ParameterSet, rng: &mut SeededRng) -> Result<IpkpInstance> {
    gen_inhomogeneous(params, Variant::IpkpStar, rng)
}

pub fn gen_pkp(params: &ParameterSet, rng: &mut SeededRng) -> Result<PkpInstance> {
    gen_homogeneous(params, Variant::Pkp, rng)
}

pub fn gen_pkp_star(params: &ParameterSet, rng: &mut SeededRng) -> Result<PkpInstance> {
    gen_homogeneous(params, Variant::PkpStar, rng)
}

/// Dispatches on `params.variant`.
pub fn generate(params: &ParameterSet, rng: &mut SeededRng) -> Result<Instance> {
    Ok(match params.variant {
        Variant::Ipkp => Instance::Ipkp(gen_ipkp(params, rng)?),
        Variant::IpkpStar => Instance::Ipkp(gen_ipkp_star(params, rng)?),
        Variant::Pkp => Instance::Pkp(gen_pkp(params, rng)?),
        Variant::PkpStar => Instance::Pkp(gen_pkp_star(params, rng)?),
    })
}

/// Reference homogeneous generator: draws `B` and `pi`, then redraws `A`
/// until `A * Pi * B = 0`. Only usable at tiny parameters.
pub fn gen_homogeneous_by_rejection(
    params: &ParameterSet,
    rng: &mut SeededRng,
    max_rounds: u64,
) -> Result<PkpInstance> {
    let variant = if params.variant.is_star() {
        Variant::PkpStar
    } else {
        Variant::Pkp
    };
    let (p, field) = with_variant(params, variant)?;
    let b = sample_b(&p, field, rng)?;
    let pi = sampling::sample_permutation(p.m as usize, rng);
    let pb = b.permute_rows(&pi)?;
    for _ in 0..max_rounds {
        let a = sampling::sample_full_rank(field, p.ell as usize, p.m as usize, rng)?;
        if a.mat_mul(&pb)?.is_zero() {
            return Ok(PkpInstance { params: p, a, b, secret: Some(pi) });
        }
    }
    Err(Error::CapExceeded {
        what: "rejection-loop generator",
        size: "unbounded".into(),
        cap: format!("{max_rounds} rounds"),
    })
}

impl From<IpkpInstance> for Instance {
    fn from(i: IpkpInstance) -> Self {
        Instance::Ipkp(i)
    }
}

impl From<PkpInstance> for Instance {
    fn from(i: PkpInstance) -> Self {
        Instance::Pkp(i)
    }
}
