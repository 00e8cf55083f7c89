//! Complex-plane regions used by the eigenvalue-sum estimates, with exact
//! membership predicates and arc rotation.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

const TAU: f64 = 2.0 * PI;

/// Half-width of the numerical band around axis sets.
pub fn eps_axis(z: Complex64) -> f64 {
    1e-9 * z.norm() + 1e-12
}

/// A subset of the complex plane.
///
/// Sector-style variants are open; `LeftHalfPlaneClosed` includes the
/// imaginary axis; the axis variants carry an `eps_axis` tolerance band.
/// `ArgInterval` holds a rotated arc that matches no named variant.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// |Im z| < kappa Re z: an open cone around the positive real axis.
    RightCone { kappa: f64 },
    /// |Im z| < -kappa Re z: an open cone around the negative real axis.
    LeftCone { kappa: f64 },
    /// pi/2 < arg z < pi/2 + 2 Arctan kappa.
    UpperSector { kappa: f64 },
    /// -pi/2 - 2 Arctan kappa < arg z < -pi/2.
    LowerSector { kappa: f64 },
    QuadrantI,
    QuadrantII,
    QuadrantIII,
    QuadrantIV,
    UpperHalfPlane,
    LowerHalfPlane,
    /// Re z <= 0.
    LeftHalfPlaneClosed,
    /// Re z > 0.
    RightHalfPlaneOpen,
    /// Re z = 0, Im z > 0, within the eps_axis band.
    UpperImaginaryAxis,
    /// -2 phi < arg z < 0: the band uncovered by dilation at angle phi.
    ResonanceSector { phi: f64 },
    NegativeReals,
    NonNegativeReals,
    /// Open arc lo < arg z < hi (universal cover; width <= 2 pi).
    ArgInterval { lo: f64, hi: f64 },
    AnyOf(Vec<Region>),
    Outside(Box<Region>),
}

impl Region {
    pub fn union(parts: Vec<Region>) -> Region {
        Region::AnyOf(parts)
    }

    pub fn complement(inner: Region) -> Region {
        Region::Outside(Box::new(inner))
    }

    /// The open arc (lo, hi) of an arc-shaped variant, reduced so that
    /// lo lies in (-pi, pi].
    fn arc(&self) -> Option<(f64, f64)> {
        let raw = match self {
            Region::RightCone { kappa } => {
                let a = kappa.atan();
                (-a, a)
            }
            Region::LeftCone { kappa } => {
                let a = kappa.atan();
                (PI - a, PI + a)
            }
            Region::UpperSector { kappa } => (FRAC_PI_2, FRAC_PI_2 + 2.0 * kappa.atan()),
            Region::LowerSector { kappa } => (-FRAC_PI_2 - 2.0 * kappa.atan(), -FRAC_PI_2),
            Region::QuadrantI => (0.0, FRAC_PI_2),
            Region::QuadrantII => (FRAC_PI_2, PI),
            Region::QuadrantIII => (-PI, -FRAC_PI_2),
            Region::QuadrantIV => (-FRAC_PI_2, 0.0),
            Region::UpperHalfPlane => (0.0, PI),
            Region::LowerHalfPlane => (-PI, 0.0),
            Region::RightHalfPlaneOpen => (-FRAC_PI_2, FRAC_PI_2),
            Region::ResonanceSector { phi } => (-2.0 * phi, 0.0),
            Region::ArgInterval { lo, hi } => (*lo, *hi),
            _ => return None,
        };
        Some(reduce_arc(raw))
    }
}

fn reduce_arc((lo, hi): (f64, f64)) -> (f64, f64) {
    let width = hi - lo;
    let mut lo = lo;
    while lo > PI {
        lo -= TAU;
    }
    while lo <= -PI {
        lo += TAU;
    }
    (lo, lo + width)
}

fn in_arc(z: Complex64, lo: f64, hi: f64) -> bool {
    let a = z.arg();
    for k in [-1.0, 0.0, 1.0] {
        let shifted = a + k * TAU;
        if shifted > lo && shifted < hi {
            return true;
        }
    }
    false
}

/// Membership test. The origin belongs to `NonNegativeReals` (and to sets
/// whose definition includes it, such as the closed left half-plane) and to
/// no open sector.
pub fn contains(r: &Region, z: Complex64) -> bool {
    let eps = eps_axis(z);
    match r {
        Region::UpperHalfPlane => z.im > 0.0,
        Region::LowerHalfPlane => z.im < 0.0,
        Region::LeftHalfPlaneClosed => z.re <= 0.0,
        Region::RightHalfPlaneOpen => z.re > 0.0,
        Region::UpperImaginaryAxis => z.re.abs() <= eps && z.im > eps,
        Region::NegativeReals => z.re < -eps && z.im.abs() <= eps,
        Region::NonNegativeReals => z.re > -eps && z.im.abs() <= eps,
        Region::AnyOf(parts) => parts.iter().any(|p| contains(p, z)),
        Region::Outside(inner) => !contains(inner, z),
        arc_variant => {
            if z.norm() == 0.0 {
                return false;
            }
            let (lo, hi) = arc_variant.arc().expect("non-arc variants handled above");
            in_arc(z, lo, hi)
        }
    }
}

/// Rotate an arc-shaped region counterclockwise by 2 phi.
///
/// The result is an `ArgInterval`; compare against named variants with
/// [`same_arc`]. Axis-band and combinator variants have no arc and are
/// rejected.
pub fn rotate_region(r: &Region, phi: f64) -> Result<Region> {
    match r.arc() {
        Some((lo, hi)) => {
            let (lo, hi) = reduce_arc((lo + 2.0 * phi, hi + 2.0 * phi));
            Ok(Region::ArgInterval { lo, hi })
        }
        None => Err(Error::UnsupportedVariant(format!(
            "{r:?} is not an arc-shaped region"
        ))),
    }
}

/// True when two arc-shaped regions describe the same open arc, up to a full
/// turn and a 1e-12 angular tolerance.
pub fn same_arc(a: &Region, b: &Region) -> bool {
    match (a.arc(), b.arc()) {
        (Some((alo, ahi)), Some((blo, bhi))) => {
            let width_match = ((ahi - alo) - (bhi - blo)).abs() <= 1e-12;
            let mut dlo = (alo - blo) % TAU;
            if dlo > PI {
                dlo -= TAU;
            }
            if dlo <= -PI {
                dlo += TAU;
            }
            width_match && dlo.abs() <= 1e-12
        }
        _ => false,
    }
}

/// Parse a config-facing region tag such as `sectorC+:kappa=1.0`,
/// `resonance:phi=0.5236`, or `quadrant2`.
pub fn parse_region_tag(tag: &str) -> Result<Region> {
    let bad = |msg: &str| Error::validation("region", msg);
    let (head, param) = match tag.split_once(':') {
        Some((h, p)) => (h.trim(), Some(p.trim())),
        None => (tag.trim(), None),
    };
    let kappa = |p: Option<&str>| -> Result<f64> {
        let p = p.ok_or_else(|| bad("missing kappa parameter"))?;
        let v = p
            .strip_prefix("kappa=")
            .ok_or_else(|| bad("expected kappa=<value>"))?
            .parse::<f64>()
            .map_err(|_| bad("kappa is not a number"))?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::KappaDomain(v))
        }
    };
    match head {
        "sectorC+" => Ok(Region::RightCone { kappa: kappa(param)? }),
        "sectorC-" => Ok(Region::LeftCone { kappa: kappa(param)? }),
        "sectorU+" => Ok(Region::UpperSector { kappa: kappa(param)? }),
        "sectorU-" => Ok(Region::LowerSector { kappa: kappa(param)? }),
        "quadrant1" => Ok(Region::QuadrantI),
        "quadrant2" => Ok(Region::QuadrantII),
        "quadrant3" => Ok(Region::QuadrantIII),
        "quadrant4" => Ok(Region::QuadrantIV),
        "upper_half" => Ok(Region::UpperHalfPlane),
        "lower_half" => Ok(Region::LowerHalfPlane),
        "left_half_closed" => Ok(Region::LeftHalfPlaneClosed),
        "right_half_open" => Ok(Region::RightHalfPlaneOpen),
        "upper_imag_axis" => Ok(Region::UpperImaginaryAxis),
        "negative_reals" => Ok(Region::NegativeReals),
        "nonnegative_reals" => Ok(Region::NonNegativeReals),
        "resonance" => {
            let p = param.ok_or_else(|| bad("missing phi parameter"))?;
            let phi = p
                .strip_prefix("phi=")
                .ok_or_else(|| bad("expected phi=<value>"))?
                .parse::<f64>()
                .map_err(|_| bad("phi is not a number"))?;
            if phi > 0.0 && phi < FRAC_PI_2 {
                Ok(Region::ResonanceSector { phi })
            } else {
                Err(bad("resonance phi must lie in (0, pi/2)"))
            }
        }
        _ => Err(bad("unknown region tag")),
    }
}

/// Canonical tag for a region, inverse of [`parse_region_tag`] on named
/// variants.
pub fn region_tag(r: &Region) -> String {
    match r {
        Region::RightCone { kappa } => format!("sectorC+:kappa={kappa}"),
        Region::LeftCone { kappa } => format!("sectorC-:kappa={kappa}"),
        Region::UpperSector { kappa } => format!("sectorU+:kappa={kappa}"),
        Region::LowerSector { kappa } => format!("sectorU-:kappa={kappa}"),
        Region::QuadrantI => "quadrant1".into(),
        Region::QuadrantII => "quadrant2".into(),
        Region::QuadrantIII => "quadrant3".into(),
        Region::QuadrantIV => "quadrant4".into(),
        Region::UpperHalfPlane => "upper_half".into(),
        Region::LowerHalfPlane => "lower_half".into(),
        Region::LeftHalfPlaneClosed => "left_half_closed".into(),
        Region::RightHalfPlaneOpen => "right_half_open".into(),
        Region::UpperImaginaryAxis => "upper_imag_axis".into(),
        Region::ResonanceSector { phi } => format!("resonance:phi={phi}"),
        Region::NegativeReals => "negative_reals".into(),
        Region::NonNegativeReals => "nonnegative_reals".into(),
        Region::ArgInterval { lo, hi } => format!("arg_interval:{lo}..{hi}"),
        Region::AnyOf(parts) => {
            let inner: Vec<String> = parts.iter().map(region_tag).collect();
            format!("any_of({})", inner.join(", "))
        }
        Region::Outside(inner) => format!("outside({})", region_tag(inner)),
    }
}
