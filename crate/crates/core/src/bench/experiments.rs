use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::config::Experiment;
use super::{random_nonzero_subset, random_subset};
use super::report::{CatalogComparison, CheckRecord, Measurement};
use crate::apps::{collinear_deviation, is_nonaveraging, max_nonaveraging, mixed_energy_sum, q_lambda};
use crate::avoidance::{
    avoids, bound_catalog, bound_threshold, catalog_entry, construct_parity_set, max_avoiding,
    search::EXHAUSTIVE_LIMIT, BoundCatalogEntry, CatalogParameter, SearchMode, SearchOptions,
};
use crate::energetics::additive_energy;
use crate::error::Result;
use crate::families::{build_family, t_invariant, t_star_invariant, TStarMode, EXACT_TSTAR_LIMIT};
use crate::fpcore::{PrimeField, ResidueSet};
use crate::spectral::{
    les_inequality_check, spectrum, spectrum_mult_energy_report, spectrum_size_bound_check, SpectrumParams,
};

#[derive(Default)]
pub(crate) struct TaskOutput {
    pub measurements: Vec<Measurement>,
    pub comparisons: Vec<CatalogComparison>,
    pub checks: Vec<CheckRecord>,
}

impl TaskOutput {
    fn compare(&mut self, m: &Measurement, entry: &BoundCatalogEntry, t: u64, measured: usize) -> Result<()> {
        let threshold = bound_threshold(entry, m.p, t.max(1))?;
        self.comparisons.push(CatalogComparison {
            experiment: m.experiment.clone(),
            instance: m.instance,
            p: m.p,
            entry: entry.name.clone(),
            kappa: entry.kappa,
            t: t.max(1),
            measured,
            threshold,
            ratio: measured as f64 / threshold,
        });
        Ok(())
    }
}

fn auto_mode(field: PrimeField, mode: Option<SearchMode>) -> SearchMode {
    mode.unwrap_or(if field.p() <= EXHAUSTIVE_LIMIT { SearchMode::Exhaustive } else { SearchMode::Randomized })
}

pub(crate) fn run(experiment: &Experiment, field: PrimeField, rng: &mut ChaCha8Rng) -> Result<TaskOutput> {
    let name = experiment.name();
    let p = field.p();
    let mut out = TaskOutput::default();
    match experiment {
        Experiment::AvoidCatalog { families, mode, budget } => {
            for (i, kind) in families.iter().enumerate() {
                let family = build_family(field, kind)?;
                let options = SearchOptions { mode: auto_mode(field, *mode), budget: *budget, seed: rng.random() };
                let found = max_avoiding(&family, &options)?;
                let t = t_invariant(&family)?.value;
                let star_exact = family.len() <= EXACT_TSTAR_LIMIT;
                let star_mode = if star_exact { TStarMode::Exact } else { TStarMode::Greedy };
                let t_star = t_star_invariant(&family, star_mode)?.value;
                let ok = avoids(&found.witness, &family)?;
                out.checks.push(CheckRecord::new(name, "witness avoids family", p, ok, "==", true, ok));
                let m = Measurement::new(name, i, p)
                    .with("family", kind)
                    .with("equations", family.len())
                    .with("t", t)
                    .with("t_star", t_star)
                    .with("t_star_exact", star_exact)
                    .with("size", found.size)
                    .with("exact", found.exact)
                    .with("witness", found.witness.elements());
                for entry in bound_catalog() {
                    let param = match entry.parameter {
                        CatalogParameter::FamilySize => family.len() as u64,
                        CatalogParameter::T => t as u64,
                        CatalogParameter::TStar => t_star as u64,
                        CatalogParameter::Order => continue,
                    };
                    out.compare(&m, &entry, param, found.size)?;
                }
                out.measurements.push(m);
            }
        }
        Experiment::ParitySweep { qs } => {
            let entry = catalog_entry("parity-construction").expect("catalog entry");
            for (i, &q) in qs.iter().filter(|&&q| q % 2 == 0 && q >= 4 && q * q < p).enumerate() {
                let c = construct_parity_set(field, q)?;
                let size = c.set.len();
                let formula = (p.div_ceil(q) - 1).div_ceil(2) as usize;
                let lower = p as f64 / (2 * q) as f64 - 1.0;
                let fam_size = c.family.len();
                let ratio = size as f64 * (fam_size as f64).sqrt() / p as f64;
                let ok = avoids(&c.set, &c.family)?;
                out.checks.push(CheckRecord::new(name, &format!("q={q} avoids"), p, ok, "==", true, ok));
                out.checks.push(CheckRecord::new(name, &format!("q={q} size"), p, size, "==", formula, size == formula));
                out.checks.push(CheckRecord::new(
                    name,
                    &format!("q={q} size lower bound"),
                    p,
                    size,
                    ">=",
                    lower,
                    size as f64 >= lower,
                ));
                out.checks.push(
                    CheckRecord::new(name, &format!("q={q} density ratio"), p, ratio, ">=", 0.125, ratio >= 0.125)
                        .soft(),
                );
                let m = Measurement::new(name, i, p)
                    .with("q", q)
                    .with("size", size)
                    .with("size_formula", formula)
                    .with("equations", fam_size)
                    .with("avoids", ok)
                    .with("ratio", ratio);
                out.compare(&m, &entry, fam_size as u64, size)?;
                out.measurements.push(m);
            }
        }
        Experiment::CollinearSweep { sizes, instances } => {
            let mut idx = 0;
            for &size in sizes.iter().filter(|&&s| s >= 1 && s <= field.size()) {
                for _ in 0..*instances {
                    let a = random_subset(field, size, rng);
                    let d = collinear_deviation(&a)?;
                    if size >= 2 {
                        let total: u64 = q_lambda(&a)?.iter().sum();
                        let n = size as u64;
                        out.checks.push(CheckRecord::new(
                            name,
                            "sum of q",
                            p,
                            total,
                            "==",
                            n * n * (n - 1),
                            total == n * n * (n - 1),
                        ));
                    }
                    out.measurements.push(
                        Measurement::new(name, idx, p)
                            .with("size", size)
                            .with("total", d.total.to_string())
                            .with("expected", d.expected.to_f64())
                            .with("deviation", d.deviation.to_f64())
                            .with("reference", d.reference)
                            .with("ratio", d.ratio),
                    );
                    idx += 1;
                }
            }
        }
        Experiment::NonAveragingSweep { orders, mode, budget } => {
            let entry = catalog_entry("non-averaging").expect("catalog entry");
            for (i, &t) in orders.iter().filter(|&&t| t >= 1 && 2 * t < p).enumerate() {
                let options = SearchOptions { mode: auto_mode(field, *mode), budget: *budget, seed: rng.random() };
                let found = max_nonaveraging(field, t, &options)?;
                let ok = is_nonaveraging(&found.witness, t)?;
                out.checks.push(CheckRecord::new(name, &format!("t={t} witness"), p, ok, "==", true, ok));
                let m = Measurement::new(name, i, p)
                    .with("t", t)
                    .with("size", found.size)
                    .with("exact", found.exact)
                    .with("witness", found.witness.elements());
                out.compare(&m, &entry, t, found.size)?;
                out.measurements.push(m);
            }
        }
        Experiment::MixedEnergySweep { set_size, x_size, instances } => {
            for i in 0..*instances {
                let a = random_subset(field, (*set_size).clamp(1, field.size()), rng);
                let x = random_nonzero_subset(field, (*x_size).clamp(1, field.size() - 1), rng);
                let r = mixed_energy_sum(&a, &x)?;
                let identity = mixed_energy_sum(&a, &ResidueSet::singleton(field, 1))?.sum;
                let energy = additive_energy(&a, &a)?.value;
                out.checks.push(CheckRecord::new(name, "X={1} reduction", p, identity, "==", energy, identity == energy));
                out.measurements.push(
                    Measurement::new(name, i, p)
                        .with("set_size", a.len())
                        .with("x_size", x.len())
                        .with("sum", r.sum.to_string())
                        .with("expected", r.expected.to_f64())
                        .with("deviation", r.deviation.to_f64())
                        .with("relative_deviation", r.deviation.to_f64() / r.expected.to_f64()),
                );
            }
        }
        Experiment::SpectrumEnergySweep { density, epsilons, instances } => {
            let size = ((density * p as f64).round() as usize).clamp(1, field.size());
            let mut idx = 0;
            for _ in 0..*instances {
                let a = random_subset(field, size, rng);
                let base = SpectrumParams::new(a, 1.0)?;
                for &eps in epsilons {
                    let params = base.with_epsilon(eps)?;
                    let bound = spectrum_size_bound_check(&params);
                    out.checks.push(CheckRecord::new(
                        name,
                        "spectrum size bound",
                        p,
                        bound.size,
                        "<=",
                        bound.bound,
                        bound.ok,
                    ));
                    let spec = spectrum(&params);
                    let delta = params.delta().to_f64();
                    let limit = delta.powf(-1.0 / 6.0) * eps.powf(-2.0 / 3.0) * (p as f64).sqrt();
                    let keep = (limit.ceil() as usize).saturating_sub(1).min(spec.len());
                    let b = ResidueSet::new(field, spec.elements()[..keep].iter().copied());
                    let mut m = Measurement::new(name, idx, p)
                        .with("set_size", size)
                        .with("epsilon", eps)
                        .with("spectrum_size", spec.len())
                        .with("size_bound", bound.bound)
                        .with("subset_size", b.len());
                    if !b.is_empty() {
                        let les = les_inequality_check(&params, &b, 2)?;
                        out.checks.push(CheckRecord::new(name, "T_2 lower bound", p, les.lhs, ">=", les.rhs, les.ok));
                        let r = spectrum_mult_energy_report(&params, &b)?;
                        m = m
                            .with("mult_energy", r.emult.to_string())
                            .with("reference", r.reference)
                            .with("ratio", r.ratio);
                    }
                    out.measurements.push(m);
                    idx += 1;
                }
            }
        }
    }
    Ok(out)
}
