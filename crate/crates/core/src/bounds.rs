//! Certified intervals for the grope norm `‖K‖^q`.
//!
//! Every lower bound comes from an obstruction (signatures, the grope
//! filtration, ρ-invariants) and every upper bound from a construction
//! (a grope witness, a slice surface). [`combine`] intersects them and
//! records which piece of evidence supplied each endpoint.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::grope::{GropeError, MultiGrope};
use crate::scalar::{format_exact_and_decimal, Scalar};
use crate::seifert::{self, SeifertError, SeifertMatrix};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("q must be at least 1")]
    QBelowOne,
    #[error("signature bound needs an even nonnegative signature, got {0}")]
    BadSignature(i64),
    #[error("Arf invariant must be 0 or 1, got {0}")]
    BadArf(u8),
    #[error("filtration evidence needs n >= 2, got {0}")]
    FiltrationTooLow(u32),
    #[error("rho evidence needs a nonnegative infimum")]
    NegativeRho,
    #[error(transparent)]
    Grope(#[from] GropeError),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
    #[error("inconsistent evidence: lower bound {lower} from {lower_source} exceeds upper bound {upper} from {upper_source}")]
    Inconsistent {
        lower: String,
        lower_source: String,
        upper: String,
        upper_source: String,
    },
}

fn check_q<T: Scalar>(q: &T) -> Result<(), BoundError> {
    if q.is_at_least_one() {
        Ok(())
    } else {
        Err(BoundError::QBelowOne)
    }
}

/// `σ/(4q)` when `Arf = 0`, else `1 + max(σ − 2, 0)/(4q)`.
pub fn lower_from_signature<T: Scalar>(sigma_max: i64, arf: u8, q: &T) -> Result<T, BoundError> {
    check_q(q)?;
    if sigma_max < 0 || sigma_max % 2 != 0 {
        return Err(BoundError::BadSignature(sigma_max));
    }
    let four_q = T::from_int(4) * q.clone();
    match arf {
        0 => Ok(T::from_int(sigma_max) / four_q),
        1 => Ok(T::one() + T::from_int((sigma_max - 2).max(0)) / four_q),
        other => Err(BoundError::BadArf(other)),
    }
}

/// `K ∉ G_n` forces `‖K‖^q ≥ 1/(2q)^{n−2}`.
pub fn lower_from_filtration<T: Scalar>(n: u32, q: &T) -> Result<T, BoundError> {
    check_q(q)?;
    if n < 2 {
        return Err(BoundError::FiltrationTooLow(n));
    }
    Ok(T::one() / (T::from_int(2) * q.clone()).powu(n - 2))
}

/// `min(ρ/(4(2q)^{n+1}), 1/(2q)^n)` for `ρ = inf |ρ_n|`.
pub fn lower_from_rho<T: Scalar>(n: u32, inf_abs_rho: &T, q: &T) -> Result<T, BoundError> {
    check_q(q)?;
    if *inf_abs_rho < T::zero() {
        return Err(BoundError::NegativeRho);
    }
    let two_q = T::from_int(2) * q.clone();
    let first = inf_abs_rho.clone() / (T::from_int(4) * two_q.powu(n + 1));
    let second = T::one() / two_q.powu(n);
    Ok(first.min_of(second))
}

/// The length of any witness grope bounds the infimum from above.
pub fn upper_from_witness<T: Scalar>(witness: &MultiGrope, q: &T) -> Result<T, BoundError> {
    check_q(q)?;
    Ok(witness.length_q(q)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvidenceKind {
    /// Maximal `|σ_K(ω)|` over non-roots, with the Arf invariant.
    Signature {
        sigma_max: i64,
        arf: u8,
    },
    /// `K ∉ G_n`.
    Filtration {
        n: u32,
    },
    /// Asserted `inf |ρ_n|` over all n-solutions.
    Rho {
        n: u32,
        inf_abs_rho: Rational,
    },
    Witness(MultiGrope),
    SliceGenus(u64),
    TopologicallySlice,
}

impl fmt::Display for EvidenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvidenceKind::Signature { sigma_max, arf } => {
                write!(f, "signature (sigma={sigma_max}, arf={arf})")
            }
            EvidenceKind::Filtration { n } => write!(f, "filtration (not in G_{n})"),
            EvidenceKind::Rho { n, inf_abs_rho } => {
                write!(f, "rho (n={n}, inf|rho|={inf_abs_rho})")
            }
            EvidenceKind::Witness(g) => write!(f, "witness ({} branches)", g.branch_count()),
            EvidenceKind::SliceGenus(g) => write!(f, "slice genus {g}"),
            EvidenceKind::TopologicallySlice => write!(f, "topologically slice"),
        }
    }
}

/// One tagged fact about a knot together with where it comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundEvidence {
    pub kind: EvidenceKind,
    pub provenance: String,
}

impl BoundEvidence {
    pub fn new(kind: EvidenceKind, provenance: impl Into<String>) -> Self {
        BoundEvidence {
            kind,
            provenance: provenance.into(),
        }
    }

    /// `kind [provenance]`.
    pub fn describe(&self) -> String {
        if self.provenance.is_empty() {
            self.kind.to_string()
        } else {
            format!("{} [{}]", self.kind, self.provenance)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Upper<T> {
    Finite(T),
    Infinite,
}

impl<T: fmt::Display> fmt::Display for Upper<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Upper::Finite(v) => v.fmt(f),
            Upper::Infinite => f.write_str("inf"),
        }
    }
}

/// `[lower, upper]` with the evidence responsible for each endpoint;
/// `None` means the trivial endpoint (`0` or `+∞`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormInterval<T> {
    pub lower: T,
    pub upper: Upper<T>,
    pub lower_source: Option<BoundEvidence>,
    pub upper_source: Option<BoundEvidence>,
}

impl<T: Scalar> NormInterval<T> {
    pub fn unbounded() -> Self {
        NormInterval {
            lower: T::zero(),
            upper: Upper::Infinite,
            lower_source: None,
            upper_source: None,
        }
    }

    pub fn contains(&self, x: &T) -> bool {
        *x >= self.lower
            && match &self.upper {
                Upper::Finite(u) => x <= u,
                Upper::Infinite => true,
            }
    }

    /// Whether `self ⊆ other`.
    pub fn is_within(&self, other: &Self) -> bool {
        let upper_ok = match (&self.upper, &other.upper) {
            (_, Upper::Infinite) => true,
            (Upper::Infinite, Upper::Finite(_)) => false,
            (Upper::Finite(a), Upper::Finite(b)) => a <= b,
        };
        self.lower >= other.lower && upper_ok
    }
}

impl NormInterval<Rational> {
    /// Decimal approximation, for display and plotting.
    pub fn to_f64(&self) -> NormInterval<f64> {
        NormInterval {
            lower: self.lower.to_f64().unwrap_or(f64::NAN),
            upper: match &self.upper {
                Upper::Finite(u) => Upper::Finite(u.to_f64().unwrap_or(f64::NAN)),
                Upper::Infinite => Upper::Infinite,
            },
            lower_source: self.lower_source.clone(),
            upper_source: self.upper_source.clone(),
        }
    }

    /// `[lower, upper]` with exact and decimal endpoints.
    pub fn render(&self) -> String {
        let upper = match &self.upper {
            Upper::Finite(u) => format_exact_and_decimal(u),
            Upper::Infinite => "inf".to_string(),
        };
        format!("[{}, {}]", format_exact_and_decimal(&self.lower), upper)
    }
}

fn lower_bound_of(evidence: &BoundEvidence, q: &Rational) -> Result<Option<Rational>, BoundError> {
    Ok(match &evidence.kind {
        EvidenceKind::Signature { sigma_max, arf } => {
            Some(lower_from_signature(*sigma_max, *arf, q)?)
        }
        EvidenceKind::Filtration { n } => Some(lower_from_filtration(*n, q)?),
        EvidenceKind::Rho { n, inf_abs_rho } => Some(lower_from_rho(*n, inf_abs_rho, q)?),
        _ => None,
    })
}

fn upper_bound_of(evidence: &BoundEvidence, q: &Rational) -> Result<Option<Rational>, BoundError> {
    Ok(match &evidence.kind {
        EvidenceKind::Witness(g) => Some(upper_from_witness(g, q)?),
        EvidenceKind::SliceGenus(g) => Some(Rational::from_count(*g as u128)),
        EvidenceKind::TopologicallySlice if *q > Rational::from_int(1) => Some(Rational::zero()),
        _ => None,
    })
}

/// The `(lower, upper)` bounds a single piece of evidence gives at `q`.
pub fn evidence_bounds(
    evidence: &BoundEvidence,
    q: &Rational,
) -> Result<(Option<Rational>, Option<Rational>), BoundError> {
    check_q(q)?;
    Ok((lower_bound_of(evidence, q)?, upper_bound_of(evidence, q)?))
}

/// Largest lower bound and smallest upper bound over all evidence. The
/// first evidence attaining an endpoint is credited with it.
pub fn combine(
    evidence: &[BoundEvidence],
    q: &Rational,
) -> Result<NormInterval<Rational>, BoundError> {
    check_q(q)?;
    let mut interval = NormInterval::unbounded();
    for e in evidence {
        if let Some(lower) = lower_bound_of(e, q)? {
            if lower > interval.lower {
                interval.lower = lower;
                interval.lower_source = Some(e.clone());
            }
        }
        if let Some(upper) = upper_bound_of(e, q)? {
            let better = match &interval.upper {
                Upper::Infinite => true,
                Upper::Finite(u) => upper < *u,
            };
            if better {
                interval.upper = Upper::Finite(upper);
                interval.upper_source = Some(e.clone());
            }
        }
    }
    if let Upper::Finite(upper) = &interval.upper {
        if interval.lower > *upper {
            let name =
                |s: &Option<BoundEvidence>| s.as_ref().map_or("none".into(), |e| e.describe());
            return Err(BoundError::Inconsistent {
                lower: format_exact_and_decimal(&interval.lower),
                lower_source: name(&interval.lower_source),
                upper: format_exact_and_decimal(upper),
                upper_source: name(&interval.upper_source),
            });
        }
    }
    Ok(interval)
}

/// Default scan bound for signatures: at least 12, and past `2 deg Δ`.
pub fn default_d_max(seifert: &SeifertMatrix) -> u64 {
    let degree = seifert::alexander(seifert).degree().unwrap_or(0) as u64;
    (2 * degree + 1).max(12)
}

/// Signature and Arf evidence computed from a Seifert matrix.
pub fn seifert_evidence(seifert: &SeifertMatrix, d_max: Option<u64>) -> BoundEvidence {
    let d_max = d_max.unwrap_or_else(|| default_d_max(seifert));
    let scan = seifert::max_abs_signature(seifert, d_max);
    let arf = seifert::arf(seifert);
    let at = scan.at.map_or("none".to_string(), |a| a.to_string());
    let mut provenance =
        format!("Levine-Tristram scan over d <= {d_max} (max at {at}), Arf by Murasugi congruence");
    if !scan.saturated {
        provenance.push_str(", scan not saturated");
    }
    BoundEvidence::new(
        EvidenceKind::Signature {
            sigma_max: scan.max_abs,
            arf,
        },
        provenance,
    )
}

/// Bounds on `d^q(K, J) = ‖K # −J‖^q`.
pub fn distance_bounds(
    a_k: &SeifertMatrix,
    a_j: &SeifertMatrix,
    extra: &[BoundEvidence],
    q: &Rational,
    d_max: Option<u64>,
) -> Result<NormInterval<Rational>, BoundError> {
    check_q(q)?;
    let mut evidence = vec![difference_evidence(a_k, a_j, d_max)];
    evidence.extend_from_slice(extra);
    combine(&evidence, q)
}

/// Signature and Arf evidence for `K # −J`.
pub fn difference_evidence(
    a_k: &SeifertMatrix,
    a_j: &SeifertMatrix,
    d_max: Option<u64>,
) -> BoundEvidence {
    let difference = seifert::connected_sum(a_k, &seifert::mirror_reverse(a_j));
    seifert_evidence(&difference, d_max)
}
