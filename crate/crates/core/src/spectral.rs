//! Large spectra `Spec_eps(A)` and the inequality checks built on them.

use serde::{Deserialize, Serialize};

use crate::energetics::{moment_t_k, multiplicative_energy};
use crate::error::{Error, Result};
use crate::fpcore::{Fraction, ResidueSet};
use crate::harmonic::{dft, SpectrumTable};

/// Relative slack applied toward inclusion at the membership threshold.
pub const MEMBERSHIP_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SpectrumParams {
    source: ResidueSet,
    epsilon: f64,
    delta: Fraction,
    table: SpectrumTable,
}

impl SpectrumParams {
    pub fn new(source: ResidueSet, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::BadEpsilon(epsilon.to_string()));
        }
        if source.is_empty() {
            return Err(Error::EmptySource);
        }
        let delta = Fraction::new(source.len() as i128, source.field().p() as i128);
        let table = dft(&source);
        Ok(SpectrumParams { source, epsilon, delta, table })
    }

    pub fn source(&self) -> &ResidueSet {
        &self.source
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Density `|A| / p`.
    pub fn delta(&self) -> Fraction {
        self.delta
    }

    pub fn table(&self) -> &SpectrumTable {
        &self.table
    }

    /// Same source, different threshold; reuses the transform.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::BadEpsilon(epsilon.to_string()));
        }
        Ok(SpectrumParams { epsilon, ..self.clone() })
    }
}

/// `{ r : |A^(r)| >= eps |A| }`.
pub fn spectrum(params: &SpectrumParams) -> ResidueSet {
    let threshold = params.epsilon * params.source.len() as f64 * (1.0 - MEMBERSHIP_SLACK);
    let field = params.source.field();
    let mask: Vec<bool> = params.table.magnitudes().iter().map(|&m| m >= threshold).collect();
    debug_assert!(mask[0]);
    ResidueSet::from_indicator(field, &mask)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeBoundReport {
    pub size: usize,
    pub bound: f64,
    pub ok: bool,
}

/// `|Spec_eps(A)| <= p / (|A| eps^2)`.
pub fn spectrum_size_bound_check(params: &SpectrumParams) -> SizeBoundReport {
    let size = spectrum(params).len();
    let p = params.source.field().p() as f64;
    let bound = p / (params.source.len() as f64 * params.epsilon * params.epsilon);
    // the inclusive threshold can admit frequencies a factor (1 - slack) below eps |A|
    let admissible = bound / ((1.0 - MEMBERSHIP_SLACK) * (1.0 - MEMBERSHIP_SLACK));
    SizeBoundReport { size, bound, ok: size as f64 <= admissible }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LesReport {
    pub k: usize,
    pub lhs: u128,
    pub rhs: f64,
    pub ok: bool,
}

fn require_in_spectrum(params: &SpectrumParams, b: &ResidueSet) -> Result<()> {
    params.source.same_field(b)?;
    let spec = spectrum(params);
    match b.iter().find(|&r| !spec.contains(r)) {
        Some(r) => Err(Error::NotInSpectrum(r)),
        None => Ok(()),
    }
}

/// `T_k(B) >= eps^(2k) |B|^(2k) |A| / p` for `B ⊆ Spec_eps(A)`.
pub fn les_inequality_check(params: &SpectrumParams, b: &ResidueSet, k: usize) -> Result<LesReport> {
    if k < 2 {
        return Err(Error::BadParameter("k must be >= 2".into()));
    }
    require_in_spectrum(params, b)?;
    let lhs = moment_t_k(b, k)?;
    let two_k = 2 * k as i32;
    let rhs = params.epsilon.powi(two_k) * (b.len() as f64).powi(two_k) * params.source.len() as f64
        / params.source.field().p() as f64;
    Ok(LesReport { k, lhs, rhs, ok: lhs as f64 >= rhs * (1.0 - MEMBERSHIP_SLACK) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultEnergyReport {
    pub size: usize,
    pub emult: u128,
    /// `|B|^2 delta^(-2/3) eps^(-8/3)`.
    pub reference: f64,
    pub ratio: f64,
    /// The admissible size `delta^(-1/6) eps^(-2/3) sqrt(p)`.
    pub size_limit: f64,
}

/// Multiplicative energy of a spectrum subset against its reference scale.
/// No pass/fail: the implied constant is unknown.
pub fn spectrum_mult_energy_report(params: &SpectrumParams, b: &ResidueSet) -> Result<MultEnergyReport> {
    require_in_spectrum(params, b)?;
    let delta = params.delta.to_f64();
    let eps = params.epsilon;
    let p = params.source.field().p() as f64;
    let size_limit = delta.powf(-1.0 / 6.0) * eps.powf(-2.0 / 3.0) * p.sqrt();
    if b.len() as f64 >= size_limit {
        return Err(Error::HypothesisViolated(format!(
            "|B| = {} is not below delta^(-1/6) eps^(-2/3) sqrt(p) = {size_limit:.4}",
            b.len()
        )));
    }
    let emult = multiplicative_energy(b, b)?.value;
    let n = b.len() as f64;
    let reference = n * n * delta.powf(-2.0 / 3.0) * eps.powf(-8.0 / 3.0);
    let ratio = if reference > 0.0 { emult as f64 / reference } else { 0.0 };
    Ok(MultEnergyReport { size: b.len(), emult, reference, ratio, size_limit })
}
