//! Contact mechanics and lubrication-regime arithmetic.
//!
//! Composite roughness, composite radius and modulus, the Hamrock-Dowson
//! minimum film thickness, the film-thickness ratio and its regime
//! classification, plus Hertz sphere-on-flat pressure and reciprocating
//! kinematics helpers. All internal computation is SI; surface roughness is
//! ingested in micrometres and converted where it meets film thickness.
//!
//! Convention note: the composite modulus here is
//! `E* = 2 / ((1 - nu_a^2)/E_a + (1 - nu_b^2)/E_b)`, the form the film
//! thickness formula expects. The Hertz helper uses the standard reduced
//! modulus `E' = E*/2`.

use crate::error::{Error, Result};

/// Sa roughness of the two mating surfaces, micrometres.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SurfacePair {
    /// Ball-specimen roughness.
    pub sigma1_um: f64,
    /// Disk-specimen roughness.
    pub sigma2_um: f64,
}

impl SurfacePair {
    fn validate(&self) -> Result<()> {
        if !(self.sigma1_um.is_finite() && self.sigma1_um > 0.0) {
            return Err(Error::invalid("sigma1_um", "must be positive and finite"));
        }
        if !(self.sigma2_um.is_finite() && self.sigma2_um > 0.0) {
            return Err(Error::invalid("sigma2_um", "must be positive and finite"));
        }
        Ok(())
    }
}

/// Geometry, material and operating parameters of the ball-on-disk contact.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ContactSpec {
    /// Ball radius, metres.
    pub ball_radius_m: f64,
    /// Disk radius, metres; `f64::INFINITY` for a flat disk.
    pub disk_radius_m: f64,
    /// Ball elastic modulus, pascals.
    pub ball_modulus_pa: f64,
    /// Disk elastic modulus, pascals.
    pub disk_modulus_pa: f64,
    pub ball_poisson: f64,
    pub disk_poisson: f64,
    /// Ellipticity parameter of the contact.
    pub ellipticity: f64,
    /// Absolute lubricant viscosity, pascal-seconds.
    pub viscosity_pa_s: f64,
    /// Mean (entrainment) velocity between the surfaces, m/s.
    pub entrainment_velocity_m_s: f64,
    /// Normal load, newtons.
    pub load_n: f64,
}

impl ContactSpec {
    fn validate(&self) -> Result<()> {
        if !(self.ball_radius_m.is_finite() && self.ball_radius_m > 0.0) {
            return Err(Error::invalid("ball_radius_m", "must be positive and finite"));
        }
        if self.disk_radius_m.is_nan() || self.disk_radius_m <= 0.0 {
            return Err(Error::invalid(
                "disk_radius_m",
                "must be positive (may be infinite)",
            ));
        }
        for (name, value) in [
            ("ball_modulus_pa", self.ball_modulus_pa),
            ("disk_modulus_pa", self.disk_modulus_pa),
            ("ellipticity", self.ellipticity),
            ("viscosity_pa_s", self.viscosity_pa_s),
            ("entrainment_velocity_m_s", self.entrainment_velocity_m_s),
            ("load_n", self.load_n),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("must be positive and finite, got {value}"),
                ));
            }
        }
        for (name, nu) in [
            ("ball_poisson", self.ball_poisson),
            ("disk_poisson", self.disk_poisson),
        ] {
            if !(nu.is_finite() && nu > 0.0 && nu < 0.5) {
                return Err(Error::invalid(
                    name,
                    format!("must lie in (0, 0.5), got {nu}"),
                ));
            }
        }
        Ok(())
    }
}

/// Lubrication regime implied by the film-thickness ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Boundary,
    Mixed,
    Fluid,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Boundary => write!(f, "boundary"),
            Regime::Mixed => write!(f, "mixed"),
            Regime::Fluid => write!(f, "fluid"),
        }
    }
}

/// Full film-thickness evaluation for one contact.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LubricationReport {
    pub sigma_c_um: f64,
    pub composite_radius_m: f64,
    pub composite_modulus_pa: f64,
    pub h_min_m: f64,
    pub lambda_ratio: f64,
    pub regime: Regime,
}

/// Hertz sphere-on-flat contact pressures.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HertzContact {
    /// Contact-circle radius, metres.
    pub contact_radius_m: f64,
    /// Peak pressure at the contact centre, pascals.
    pub max_pressure_pa: f64,
    /// Mean pressure over the contact circle, pascals.
    pub mean_pressure_pa: f64,
}

/// Sliding and entrainment speeds of a reciprocating contact.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ReciprocatingVelocities {
    /// Mean sliding speed over a cycle, m/s.
    pub mean_sliding_m_s: f64,
    /// Entrainment speed with one body stationary, m/s.
    pub entrainment_m_s: f64,
}

/// Root-sum-square composite roughness, micrometres.
pub fn composite_roughness(pair: &SurfacePair) -> Result<f64> {
    pair.validate()?;
    Ok((pair.sigma1_um * pair.sigma1_um + pair.sigma2_um * pair.sigma2_um).sqrt())
}

/// Harmonic composite radius `1/R = 1/Ra + 1/Rb`, metres. An infinite disk
/// radius reduces to the ball radius.
pub fn composite_radius(spec: &ContactSpec) -> Result<f64> {
    spec.validate()?;
    Ok(1.0 / (1.0 / spec.ball_radius_m + 1.0 / spec.disk_radius_m))
}

/// Composite elastic modulus `E* = 2 / ((1-nu_a^2)/E_a + (1-nu_b^2)/E_b)`,
/// pascals.
pub fn composite_modulus(spec: &ContactSpec) -> Result<f64> {
    spec.validate()?;
    let compliance = (1.0 - spec.ball_poisson * spec.ball_poisson) / spec.ball_modulus_pa
        + (1.0 - spec.disk_poisson * spec.disk_poisson) / spec.disk_modulus_pa;
    Ok(2.0 / compliance)
}

/// Hamrock-Dowson minimum film thickness, metres:
/// `h_min = 7.43 R (1 - 0.85 e^(-0.31 k)) (eta mu / (E* R))^0.65 (P / (E* R^2))^(-0.21)`.
pub fn hamrock_dowson_hmin(spec: &ContactSpec) -> Result<f64> {
    spec.validate()?;
    let radius = composite_radius(spec)?;
    let modulus = composite_modulus(spec)?;
    let speed_group = spec.viscosity_pa_s * spec.entrainment_velocity_m_s / (modulus * radius);
    let load_group = spec.load_n / (modulus * radius * radius);
    if !(speed_group > 0.0 && load_group > 0.0) {
        return Err(Error::invalid(
            "spec",
            "speed and load groups must be positive",
        ));
    }
    let ellipticity_factor = 1.0 - 0.85 * (-0.31 * spec.ellipticity).exp();
    Ok(7.43 * radius * ellipticity_factor * speed_group.powf(0.65) * load_group.powf(-0.21))
}

/// Film-thickness ratio `lambda = h_min / sigma_c`, with `h_min` in metres
/// and the composite roughness in micrometres.
pub fn film_thickness_ratio(h_min_m: f64, sigma_c_um: f64) -> Result<f64> {
    if !(h_min_m.is_finite() && h_min_m > 0.0) {
        return Err(Error::invalid("h_min_m", "must be positive and finite"));
    }
    if !(sigma_c_um.is_finite() && sigma_c_um > 0.0) {
        return Err(Error::invalid("sigma_c_um", "must be positive and finite"));
    }
    Ok(h_min_m / (sigma_c_um * 1e-6))
}

/// Regime from the film-thickness ratio: boundary below 1, fluid above 3,
/// mixed between (both endpoints classify as mixed).
pub fn classify_regime(lambda_ratio: f64) -> Result<Regime> {
    if !(lambda_ratio.is_finite() && lambda_ratio > 0.0) {
        return Err(Error::invalid(
            "lambda_ratio",
            format!("must be positive and finite, got {lambda_ratio}"),
        ));
    }
    Ok(if lambda_ratio < 1.0 {
        Regime::Boundary
    } else if lambda_ratio <= 3.0 {
        Regime::Mixed
    } else {
        Regime::Fluid
    })
}

/// Hertz sphere-on-flat contact: `a = (3 P R / (4 E'))^(1/3)` with
/// `E' = E*/2`, peak pressure `3P / (2 pi a^2)`.
pub fn hertz_max_pressure(spec: &ContactSpec) -> Result<HertzContact> {
    let radius = composite_radius(spec)?;
    let reduced_modulus = composite_modulus(spec)? / 2.0;
    let contact_radius = (3.0 * spec.load_n * radius / (4.0 * reduced_modulus)).cbrt();
    let area = std::f64::consts::PI * contact_radius * contact_radius;
    Ok(HertzContact {
        contact_radius_m: contact_radius,
        max_pressure_pa: 3.0 * spec.load_n / (2.0 * area),
        mean_pressure_pa: spec.load_n / area,
    })
}

/// Mean sliding and entrainment speeds of a crank-driven reciprocating
/// contact: the slider covers two strokes per revolution.
pub fn reciprocating_velocities(stroke_m: f64, rpm: f64) -> Result<ReciprocatingVelocities> {
    if !(stroke_m.is_finite() && stroke_m > 0.0) {
        return Err(Error::invalid("stroke_m", "must be positive and finite"));
    }
    if !(rpm.is_finite() && rpm > 0.0) {
        return Err(Error::invalid("rpm", "must be positive and finite"));
    }
    let mean_sliding = 2.0 * stroke_m * rpm / 60.0;
    Ok(ReciprocatingVelocities {
        mean_sliding_m_s: mean_sliding,
        entrainment_m_s: mean_sliding / 2.0,
    })
}

/// Assembles the full report: composite quantities, film thickness (or the
/// supplied override), ratio and regime.
pub fn lubrication_report(
    spec: &ContactSpec,
    pair: &SurfacePair,
    h_min_override_m: Option<f64>,
) -> Result<LubricationReport> {
    let sigma_c_um = composite_roughness(pair)?;
    let h_min_m = match h_min_override_m {
        Some(h) if h.is_finite() && h > 0.0 => h,
        Some(h) => {
            return Err(Error::invalid(
                "h_min_override_m",
                format!("must be positive and finite, got {h}"),
            ))
        }
        None => hamrock_dowson_hmin(spec)?,
    };
    let lambda_ratio = film_thickness_ratio(h_min_m, sigma_c_um)?;
    Ok(LubricationReport {
        sigma_c_um,
        composite_radius_m: composite_radius(spec)?,
        composite_modulus_pa: composite_modulus(spec)?,
        h_min_m,
        lambda_ratio,
        regime: classify_regime(lambda_ratio)?,
    })
}
