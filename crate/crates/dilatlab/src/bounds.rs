//! Eigenvalue-sum estimates: constants, right-hand sides, left-hand sums
//! over spectral classes, and verification reports.

use crate::angle::ComplexAngle;
use crate::error::{Error, Result};
use crate::operator::{Grid, Scheme};
use crate::potential::{PartMap, Potential};
use crate::region::{contains, region_tag, Region};
use crate::spectral::{classify, EigenPair, SpectrumClassification, Tolerances};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

const QUAD_TOL: f64 = 1e-10;

/// How the one-particle constant L is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LPolicy {
    /// The semiclassical value, sharp for gamma >= 3/2 in one dimension.
    Semiclassical,
    /// Semiclassical value times a multiplier m >= 1.
    SemiclassicalTimes(f64),
    UserSupplied(f64),
}

/// Exponent pair (gamma, d) with an L policy; C is derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LTConstants {
    gamma: f64,
    d: u32,
    policy: LPolicy,
}

impl LTConstants {
    /// Validates the moment condition: gamma >= 1/2 when d = 1, gamma > 0
    /// when d = 2, gamma >= 0 when d >= 3.
    pub fn new(gamma: f64, d: u32, policy: LPolicy) -> Result<Self> {
        if d == 0 {
            return Err(Error::validation("constants.d", "dimension must be >= 1"));
        }
        if !gamma.is_finite() {
            return Err(Error::validation("constants.gamma", "must be finite"));
        }
        let ok = match d {
            1 => gamma >= 0.5,
            2 => gamma > 0.0,
            _ => gamma >= 0.0,
        };
        if !ok {
            return Err(Error::validation(
                "constants.gamma",
                "outside the admissible moment range for this dimension",
            ));
        }
        match policy {
            LPolicy::SemiclassicalTimes(m) if !(m >= 1.0) || !m.is_finite() => {
                return Err(Error::validation("constants.L_policy", "multiplier must be >= 1"));
            }
            LPolicy::UserSupplied(v) if !(v > 0.0) || !v.is_finite() => {
                return Err(Error::validation("constants.L_policy", "L must be positive"));
            }
            _ => {}
        }
        Ok(LTConstants { gamma, d, policy })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn policy(&self) -> LPolicy {
        self.policy
    }

    /// Norm exponent p = gamma + d/2.
    pub fn p(&self) -> f64 {
        self.gamma + self.d as f64 / 2.0
    }

    /// Gamma(gamma+1) / (2^d pi^(d/2) Gamma(gamma + d/2 + 1)).
    pub fn semiclassical_l(&self) -> f64 {
        let g = self.gamma;
        let d = self.d as f64;
        libm::tgamma(g + 1.0) / (2f64.powi(self.d as i32) * PI.powf(d / 2.0) * libm::tgamma(g + d / 2.0 + 1.0))
    }

    /// The constant L under the configured policy.
    pub fn l(&self) -> f64 {
        match self.policy {
            LPolicy::Semiclassical => self.semiclassical_l(),
            LPolicy::SemiclassicalTimes(m) => m * self.semiclassical_l(),
            LPolicy::UserSupplied(v) => v,
        }
    }

    /// Exact ratio C/L = 2^(1 + gamma/2 + d/4).
    pub fn c_over_l(&self) -> f64 {
        2f64.powf(1.0 + self.gamma / 2.0 + self.d as f64 / 4.0)
    }

    /// The constant C, defined through the exact ratio.
    pub fn c(&self) -> f64 {
        self.c_over_l() * self.l()
    }

    /// Config-facing policy description.
    pub fn policy_tag(&self) -> String {
        match self.policy {
            LPolicy::Semiclassical => "semiclassical".into(),
            LPolicy::SemiclassicalTimes(m) => format!("semiclassical*{m}"),
            LPolicy::UserSupplied(v) => format!("user:{v}"),
        }
    }
}

/// The estimates the laboratory can check, named by the spectral region
/// each one controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TheoremId {
    /// Classical bound on the negative reals, real potentials.
    NegativeAxis,
    /// Complement of the cone |Im z| < kappa Re z.
    ConeComplement,
    /// Cone around the negative real axis.
    LeftCone,
    /// Closed left half-plane.
    LeftHalfPlane,
    /// Upper half-plane together with the negative reals.
    UpperHalfPlane,
    /// Lower half-plane together with the negative reals.
    LowerHalfPlane,
    /// Both half-plane estimates summed (negative reals counted twice).
    BothHalfPlanes,
    /// Sector past the positive imaginary axis, width 2 Arctan kappa.
    UpperSector,
    /// Mirror sector past the negative imaginary axis.
    LowerSector,
    QuadrantOne,
    QuadrantTwo,
    QuadrantThree,
    QuadrantFour,
    /// Open right half-plane (sum of the first and fourth quadrant bounds).
    RightHalfPlane,
    /// Every isolated eigenvalue (left half-plane plus right half-plane).
    FullPlane,
    /// Resonances uncovered by dilation at angle phi.
    ResonanceSector,
    /// Band around the positive imaginary axis.
    ImaginaryAxis,
    /// Embedded-eigenvalue candidates on the positive reals.
    EmbeddedCandidates,
}

impl TheoremId {
    pub const ALL: [TheoremId; 18] = [
        TheoremId::NegativeAxis,
        TheoremId::ConeComplement,
        TheoremId::LeftCone,
        TheoremId::LeftHalfPlane,
        TheoremId::UpperHalfPlane,
        TheoremId::LowerHalfPlane,
        TheoremId::BothHalfPlanes,
        TheoremId::UpperSector,
        TheoremId::LowerSector,
        TheoremId::QuadrantOne,
        TheoremId::QuadrantTwo,
        TheoremId::QuadrantThree,
        TheoremId::QuadrantFour,
        TheoremId::RightHalfPlane,
        TheoremId::FullPlane,
        TheoremId::ResonanceSector,
        TheoremId::ImaginaryAxis,
        TheoremId::EmbeddedCandidates,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            TheoremId::NegativeAxis => "negative_axis",
            TheoremId::ConeComplement => "cone_complement",
            TheoremId::LeftCone => "left_cone",
            TheoremId::LeftHalfPlane => "left_half_plane",
            TheoremId::UpperHalfPlane => "upper_half_plane",
            TheoremId::LowerHalfPlane => "lower_half_plane",
            TheoremId::BothHalfPlanes => "both_half_planes",
            TheoremId::UpperSector => "upper_sector",
            TheoremId::LowerSector => "lower_sector",
            TheoremId::QuadrantOne => "quadrant_i",
            TheoremId::QuadrantTwo => "quadrant_ii",
            TheoremId::QuadrantThree => "quadrant_iii",
            TheoremId::QuadrantFour => "quadrant_iv",
            TheoremId::RightHalfPlane => "right_half_plane",
            TheoremId::FullPlane => "full_plane",
            TheoremId::ResonanceSector => "resonance_sector",
            TheoremId::ImaginaryAxis => "imaginary_axis",
            TheoremId::EmbeddedCandidates => "embedded_candidates",
        }
    }

    pub fn from_tag(tag: &str) -> Result<TheoremId> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.tag() == tag)
            .ok_or_else(|| Error::validation("bounds.theorems", format!("unknown theorem tag {tag:?}")))
    }
}

/// Extra parameters some estimates take.
#[derive(Debug, Clone, Copy, Default)]
pub struct BoundParams {
    pub kappa: Option<f64>,
    /// Dilation angle: the theorem parameter for the resonance estimate and
    /// the working classification angle everywhere else.
    pub phi: Option<f64>,
    /// Classification probe angle; defaults to phi/2.
    pub phi_probe: Option<f64>,
}

fn need_kappa(params: &BoundParams) -> Result<f64> {
    let k = params
        .kappa
        .ok_or_else(|| Error::validation("params.kappa", "this estimate needs kappa"))?;
    if k > 0.0 && k.is_finite() {
        Ok(k)
    } else {
        Err(Error::KappaDomain(k))
    }
}

fn need_resonance_phi(params: &BoundParams) -> Result<f64> {
    let phi = params
        .phi
        .ok_or_else(|| Error::validation("params.phi", "the resonance estimate needs phi"))?;
    if phi > 0.0 && phi < FRAC_PI_2 {
        Ok(phi)
    } else {
        Err(Error::validation("params.phi", "phi must lie in (0, pi/2)"))
    }
}

/// Smallest analyticity strip half-width the estimate's hypothesis demands;
/// zero when no dilation is involved.
pub fn alpha_required(id: TheoremId, params: &BoundParams) -> Result<f64> {
    Ok(match id {
        TheoremId::NegativeAxis
        | TheoremId::ConeComplement
        | TheoremId::LeftCone
        | TheoremId::LeftHalfPlane => 0.0,
        TheoremId::UpperHalfPlane
        | TheoremId::LowerHalfPlane
        | TheoremId::BothHalfPlanes
        | TheoremId::ImaginaryAxis => FRAC_PI_4,
        TheoremId::UpperSector | TheoremId::LowerSector => {
            FRAC_PI_4 - 0.5 * need_kappa(params)?.atan()
        }
        TheoremId::QuadrantTwo | TheoremId::QuadrantThree => FRAC_PI_4 / 2.0,
        TheoremId::QuadrantOne
        | TheoremId::QuadrantFour
        | TheoremId::RightHalfPlane
        | TheoremId::FullPlane => 3.0 * FRAC_PI_4 / 2.0,
        TheoremId::ResonanceSector => (1.5 * need_resonance_phi(params)? - FRAC_PI_2).abs(),
        TheoremId::EmbeddedCandidates => FRAC_PI_2,
    })
}

fn gate_alpha(id: TheoremId, v: &Potential, params: &BoundParams) -> Result<f64> {
    let required = alpha_required(id, params)?;
    if required > 0.0 {
        let alpha = v.alpha();
        if alpha <= required {
            return Err(Error::InsufficientAlpha { alpha, required });
        }
    }
    Ok(required)
}

// prefactor * || part(e^(i phase) V_(i dilation)) ||_p^p
fn part_term(
    v: &Potential,
    dilation: f64,
    phase: f64,
    mode: PartMap,
    p: f64,
    prefactor: f64,
) -> Result<f64> {
    Ok(prefactor * v.part_norm_pow(ComplexAngle::new(dilation), phase, mode, p, QUAD_TOL)?)
}

// (1+kappa) L ||[Re(e^(sign*i(pi/2 - atan kappa)) V_(sign*i(pi/4 - atan(kappa)/2)))]_-||_p^p
fn sector_term(v: &Potential, kappa: f64, sign: f64, l: f64, p: f64) -> Result<f64> {
    let a = kappa.atan();
    part_term(
        v,
        sign * (FRAC_PI_4 - 0.5 * a),
        sign * (FRAC_PI_2 - a),
        PartMap::ReMinus,
        p,
        (1.0 + kappa) * l,
    )
}

/// Right-hand side of the estimate for the given potential and constants.
///
/// Norms are one-dimensional, so d = 1 is required; the estimates themselves
/// additionally need gamma >= 1.
pub fn rhs(id: TheoremId, constants: &LTConstants, v: &Potential, params: &BoundParams) -> Result<f64> {
    if constants.d() != 1 {
        return Err(Error::WrongRegime(
            "potential norms are one-dimensional; use d = 1".into(),
        ));
    }
    if constants.gamma() < 1.0 {
        return Err(Error::WrongRegime("the estimates need gamma >= 1".into()));
    }
    gate_alpha(id, v, params)?;
    let p = constants.p();
    let l = constants.l();
    let c = constants.c();

    match id {
        TheoremId::NegativeAxis => {
            if !v.is_real() {
                return Err(Error::WrongRegime(
                    "the negative-axis estimate applies to real potentials".into(),
                ));
            }
            part_term(v, 0.0, 0.0, PartMap::ReMinus, p, l)
        }
        TheoremId::ConeComplement => {
            let kappa = need_kappa(params)?;
            part_term(v, 0.0, 0.0, PartMap::AbsWhole, p, c * (1.0 + 2.0 / kappa).powf(p))
        }
        TheoremId::LeftCone => {
            let kappa = need_kappa(params)?;
            part_term(v, 0.0, 0.0, PartMap::ReMinus, p, (1.0 + kappa) * l)
        }
        TheoremId::LeftHalfPlane => part_term(v, 0.0, 0.0, PartMap::AbsWhole, p, c),
        TheoremId::UpperHalfPlane => part_term(v, FRAC_PI_4, 0.0, PartMap::AbsWhole, p, c),
        TheoremId::LowerHalfPlane => part_term(v, -FRAC_PI_4, 0.0, PartMap::AbsWhole, p, c),
        TheoremId::BothHalfPlanes => Ok(rhs(TheoremId::UpperHalfPlane, constants, v, params)?
            + rhs(TheoremId::LowerHalfPlane, constants, v, params)?),
        TheoremId::UpperSector => sector_term(v, need_kappa(params)?, 1.0, l, p),
        TheoremId::LowerSector => sector_term(v, need_kappa(params)?, -1.0, l, p),
        TheoremId::QuadrantTwo => sector_term(v, 1.0, 1.0, l, p),
        TheoremId::QuadrantThree => sector_term(v, 1.0, -1.0, l, p),
        TheoremId::QuadrantOne => {
            part_term(v, 3.0 * FRAC_PI_4 / 2.0, 3.0 * FRAC_PI_4, PartMap::ReMinus, p, 2.0 * l)
        }
        TheoremId::QuadrantFour => {
            part_term(v, -3.0 * FRAC_PI_4 / 2.0, -3.0 * FRAC_PI_4, PartMap::ReMinus, p, 2.0 * l)
        }
        TheoremId::RightHalfPlane => Ok(rhs(TheoremId::QuadrantOne, constants, v, params)?
            + rhs(TheoremId::QuadrantFour, constants, v, params)?),
        TheoremId::FullPlane => Ok(rhs(TheoremId::LeftHalfPlane, constants, v, params)?
            + rhs(TheoremId::RightHalfPlane, constants, v, params)?),
        TheoremId::ResonanceSector => {
            let phi = need_resonance_phi(params)?;
            part_term(
                v,
                1.5 * phi - FRAC_PI_2,
                phi - FRAC_PI_2,
                PartMap::ReMinus,
                p,
                (1.0 + phi.tan()) * l,
            )
        }
        TheoremId::ImaginaryAxis => part_term(v, FRAC_PI_4, 0.0, PartMap::ImPlus, p, l),
        TheoremId::EmbeddedCandidates => part_term(v, FRAC_PI_2, 0.0, PartMap::RePlus, p, l),
    }
}

/// Which spectral class an estimate's left-hand side draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpectrumUse {
    Isolated,
    Resonance,
    Embedded,
}

/// Sum of multiplicity * |lambda|^gamma over the chosen class intersected
/// with the region. The resonance class additionally excludes the
/// nonnegative reals.
pub fn lhs_sum(
    classification: &SpectrumClassification,
    region: &Region,
    gamma: f64,
    use_class: SpectrumUse,
) -> f64 {
    let sum: f64 = contributors(classification, Some(region), use_class)
        .map(|p| p.multiplicity as f64 * p.value.norm().powf(gamma))
        .sum();
    // an empty f64 sum is -0.0; keep reports free of signed zeros
    sum + 0.0
}

// Points the classifier could not place decisively, in any class, that fall
// where this estimate reads its left side. They are not counted, so a large
// tally means the reported left side may be incomplete.
fn count_undecided(classification: &SpectrumClassification, region: Option<&Region>) -> usize {
    classification
        .isolated
        .iter()
        .chain(&classification.resonance)
        .chain(&classification.continuum)
        .chain(&classification.embedded_candidates)
        .filter(|p| p.ambiguous)
        .filter(|p| region.map_or(true, |r| contains(r, p.value)))
        .count()
}

fn contributors<'a>(
    classification: &'a SpectrumClassification,
    region: Option<&'a Region>,
    use_class: SpectrumUse,
) -> impl Iterator<Item = &'a EigenPair> {
    let class: &[EigenPair] = match use_class {
        SpectrumUse::Isolated => &classification.isolated,
        SpectrumUse::Resonance => &classification.resonance,
        SpectrumUse::Embedded => &classification.embedded_candidates,
    };
    class.iter().filter(move |p| {
        let in_region = region.map_or(true, |r| contains(r, p.value));
        let res_cut = use_class != SpectrumUse::Resonance
            || !contains(&Region::NonNegativeReals, p.value);
        in_region && res_cut
    })
}

/// The region and spectral class an estimate's left-hand side runs over;
/// `None` means the whole class with no regional cut.
pub fn theorem_region(id: TheoremId, params: &BoundParams) -> Result<(Option<Region>, SpectrumUse)> {
    let r = match id {
        TheoremId::NegativeAxis => Some(Region::NegativeReals),
        TheoremId::ConeComplement => Some(Region::complement(Region::RightCone {
            kappa: need_kappa(params)?,
        })),
        TheoremId::LeftCone => Some(Region::LeftCone { kappa: need_kappa(params)? }),
        TheoremId::LeftHalfPlane => Some(Region::LeftHalfPlaneClosed),
        TheoremId::UpperHalfPlane => Some(Region::union(vec![
            Region::UpperHalfPlane,
            Region::NegativeReals,
        ])),
        TheoremId::LowerHalfPlane => Some(Region::union(vec![
            Region::LowerHalfPlane,
            Region::NegativeReals,
        ])),
        TheoremId::BothHalfPlanes => None,
        TheoremId::UpperSector => Some(Region::UpperSector { kappa: need_kappa(params)? }),
        TheoremId::LowerSector => Some(Region::LowerSector { kappa: need_kappa(params)? }),
        TheoremId::QuadrantOne => Some(Region::QuadrantI),
        TheoremId::QuadrantTwo => Some(Region::QuadrantII),
        TheoremId::QuadrantThree => Some(Region::QuadrantIII),
        TheoremId::QuadrantFour => Some(Region::QuadrantIV),
        TheoremId::RightHalfPlane => Some(Region::RightHalfPlaneOpen),
        TheoremId::FullPlane => None,
        TheoremId::ResonanceSector => Some(Region::ResonanceSector {
            phi: need_resonance_phi(params)?,
        }),
        TheoremId::ImaginaryAxis => Some(Region::UpperImaginaryAxis),
        TheoremId::EmbeddedCandidates => None,
    };
    let use_class = match id {
        TheoremId::ResonanceSector => SpectrumUse::Resonance,
        TheoremId::EmbeddedCandidates => SpectrumUse::Embedded,
        _ => SpectrumUse::Isolated,
    };
    Ok((r, use_class))
}

fn lhs_for_theorem(
    id: TheoremId,
    classification: &SpectrumClassification,
    gamma: f64,
    params: &BoundParams,
) -> Result<(f64, bool, String)> {
    if id == TheoremId::BothHalfPlanes {
        let (u, ua, _) = lhs_for_theorem(TheoremId::UpperHalfPlane, classification, gamma, params)?;
        let (l, la, _) = lhs_for_theorem(TheoremId::LowerHalfPlane, classification, gamma, params)?;
        return Ok((u + l, ua || la, "upper_half+lower_half".into()));
    }
    let (region, use_class) = theorem_region(id, params)?;
    let ambiguous = contributors(classification, region.as_ref(), use_class).any(|p| p.ambiguous);
    let sum: f64 = contributors(classification, region.as_ref(), use_class)
        .map(|p| p.multiplicity as f64 * p.value.norm().powf(gamma))
        .sum::<f64>()
        + 0.0;
    let tag = match (&region, use_class) {
        (Some(r), _) => region_tag(r),
        (None, SpectrumUse::Embedded) => "embedded_candidates".into(),
        (None, _) => "all_isolated".into(),
    };
    Ok((sum, ambiguous, tag))
}

/// Optional box-size convergence check attached to a report.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoxCheck {
    pub tol_box: f64,
    /// Largest movement of a retained eigenvalue when L is doubled at
    /// fixed spacing.
    pub max_drift: f64,
    pub ok: bool,
}

/// Everything needed to reproduce one verification.
#[derive(Debug, Clone, Serialize)]
pub struct BoundInputs {
    pub potential: String,
    pub gamma: f64,
    pub d: u32,
    pub l_policy: String,
    pub l_value: f64,
    pub c_value: f64,
    pub p: f64,
    pub kappa: Option<f64>,
    pub phi: Option<f64>,
    pub phi_probe: Option<f64>,
    pub grid_half_width: f64,
    pub grid_n: usize,
    pub scheme: String,
    pub region: String,
    pub classification_phi: f64,
    pub tol_report: f64,
}

/// Outcome of checking one estimate against one spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub theorem: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub satisfied: bool,
    pub alpha_required: f64,
    /// The hypothesis sits within 10% of the potential's analyticity
    /// boundary, where dilated norms can be large; the numbers are exact
    /// but the estimate is near its range of validity.
    pub boundary_flag: bool,
    /// Ambiguously classified points falling inside this estimate's region.
    /// They are never counted in `lhs`, so a nonzero tally means the left
    /// side may be incomplete; refine the grid or adjust tol_match.
    pub undecided_in_region: usize,
    pub inputs: BoundInputs,
    pub convergence: Option<BoxCheck>,
}

fn scheme_tag(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::Fd2 => "fd2",
        Scheme::Fd4 => "fd4",
    }
}

// Working classification angle when the caller gave none: stay well inside
// the strip, never past 0.3.
fn default_phi(alpha: f64) -> f64 {
    if alpha == 0.0 {
        0.0
    } else if alpha.is_infinite() {
        0.3
    } else {
        (0.6 * alpha).min(0.3)
    }
}

/// Check one estimate end to end against a precomputed classification.
///
/// The classification must have been produced at the angle the estimate
/// needs: for the resonance estimate that is params.phi itself.
pub fn verify_with_classification(
    id: TheoremId,
    v: &Potential,
    grid: Grid,
    scheme: Scheme,
    constants: &LTConstants,
    params: &BoundParams,
    classification: &SpectrumClassification,
    tol: &Tolerances,
) -> Result<BoundReport> {
    if id == TheoremId::ResonanceSector {
        let phi = need_resonance_phi(params)?;
        if classification.phi != phi {
            return Err(Error::validation(
                "params.phi",
                "classification angle must equal the resonance angle",
            ));
        }
    }
    let required = alpha_required(id, params)?;
    let rhs_value = rhs(id, constants, v, params)?;
    let (lhs_value, ambiguous, region) =
        lhs_for_theorem(id, classification, constants.gamma(), params)?;
    if ambiguous {
        return Err(Error::ClassificationUnstable(format!(
            "an eigenvalue contributing to {} was matched ambiguously",
            id.tag()
        )));
    }
    let (region_cut, _) = theorem_region(id, params)?;
    let undecided_in_region = count_undecided(classification, region_cut.as_ref());
    let satisfied = lhs_value <= rhs_value * (1.0 + tol.tol_report);
    let ratio = if rhs_value > 0.0 {
        lhs_value / rhs_value
    } else if lhs_value == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let alpha = v.alpha();
    let boundary_flag = required > 0.0 && alpha.is_finite() && required >= 0.9 * alpha;

    Ok(BoundReport {
        theorem: id.tag(),
        lhs: lhs_value,
        rhs: rhs_value,
        ratio,
        satisfied,
        alpha_required: required,
        boundary_flag,
        undecided_in_region,
        inputs: BoundInputs {
            potential: v.describe(),
            gamma: constants.gamma(),
            d: constants.d(),
            l_policy: constants.policy_tag(),
            l_value: constants.l(),
            c_value: constants.c(),
            p: constants.p(),
            kappa: params.kappa,
            phi: params.phi,
            phi_probe: params.phi_probe,
            grid_half_width: grid.half_width(),
            grid_n: grid.n(),
            scheme: scheme_tag(scheme).into(),
            region,
            classification_phi: classification.phi,
            tol_report: tol.tol_report,
        },
        convergence: None,
    })
}

/// Classification angles used by [`verify`]: the caller's phi (and probe)
/// when given, a strip-interior default otherwise.
pub fn classification_angles(v: &Potential, params: &BoundParams) -> Result<(f64, f64)> {
    let alpha = v.alpha();
    let phi = match params.phi {
        Some(p) => {
            if alpha == 0.0 && p != 0.0 {
                return Err(Error::validation(
                    "params.phi",
                    "this potential admits no dilation; only phi = 0 classifies",
                ));
            }
            p
        }
        None => default_phi(alpha),
    };
    let probe = params.phi_probe.unwrap_or(phi / 2.0);
    Ok((phi, probe))
}

/// Classify the spectrum and check one estimate end to end.
pub fn verify(
    id: TheoremId,
    v: &Potential,
    grid: Grid,
    scheme: Scheme,
    constants: &LTConstants,
    params: &BoundParams,
    tol: &Tolerances,
) -> Result<BoundReport> {
    gate_alpha(id, v, params)?;
    let (phi, probe) = classification_angles(v, params)?;
    let classification = classify(v, grid, scheme, phi, probe, tol)?;
    verify_with_classification(id, v, grid, scheme, constants, params, &classification, tol)
}

/// Re-run the classification with L doubled at fixed spacing and record the
/// worst movement of any retained (isolated or resonance) eigenvalue.
pub fn box_check(
    v: &Potential,
    grid: Grid,
    scheme: Scheme,
    params: &BoundParams,
    tol: &Tolerances,
    tol_box: f64,
) -> Result<BoxCheck> {
    let (phi, probe) = classification_angles(v, params)?;
    let base = classify(v, grid, scheme, phi, probe, tol)?;
    let doubled = Grid::new(2.0 * grid.half_width(), 2 * grid.n() + 1)?;
    let wide = classify(v, doubled, scheme, phi, probe, tol)?;

    let mut max_drift: f64 = 0.0;
    for (small, large) in [
        (&base.isolated, &wide.isolated),
        (&base.resonance, &wide.resonance),
    ] {
        for p in small.iter() {
            let nearest = large
                .iter()
                .map(|q| (q.value - p.value).norm())
                .fold(f64::INFINITY, f64::min);
            max_drift = max_drift.max(nearest);
        }
    }
    if !max_drift.is_finite() {
        // a retained eigenvalue vanished entirely under the larger box
        return Ok(BoxCheck { tol_box, max_drift: f64::INFINITY, ok: false });
    }
    Ok(BoxCheck { tol_box, max_drift, ok: max_drift <= tol_box })
}
