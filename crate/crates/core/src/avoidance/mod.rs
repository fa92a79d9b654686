//! Counting solutions of three-variable equations in sets, avoiding sets,
//! the parity construction and the catalog of known size exponents.

pub mod search;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{build_family, check_parity_q, AffineEquation, EquationFamily, FamilyKind};
use crate::fpcore::{check_fields, Fraction, PrimeField, ResidueSet};
use crate::harmonic::{convolve_add, IntegerProfile};

pub use search::{SearchMode, SearchOptions, SearchOutcome};
use search::{Constraint, Symmetry};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionCount {
    pub equation: usize,
    pub count: u64,
    /// `|A1||A2||A3| / p`.
    pub expected: Fraction,
}

fn use_convolution(p: u64, n1: usize, n2: usize) -> bool {
    (n1 as f64) * (n2 as f64) > p as f64 * (p as f64).ln()
}

/// Exact number of `(x, y, z)` in `A1 x A2 x A3` with `a x + b y + c z = d`.
pub fn count_solutions(
    eq: &AffineEquation,
    a1: &ResidueSet,
    a2: &ResidueSet,
    a3: &ResidueSet,
) -> Result<SolutionCount> {
    a1.same_field(a2)?;
    a1.same_field(a3)?;
    let f = a1.field();
    let expected = Fraction::new(
        a1.len() as i128 * a2.len() as i128 * a3.len() as i128,
        f.p() as i128,
    );
    let count = if a1.is_empty() || a2.is_empty() || a3.is_empty() {
        0
    } else if use_convolution(f.p(), a1.len(), a2.len()) {
        // (aA1 * bA2)(w) counts pairs with a x + b y = w; then c z = d - w
        let sums = convolve_add(
            &IntegerProfile::indicator(&a1.dilate(eq.a)?),
            &IntegerProfile::indicator(&a2.dilate(eq.b)?),
        )?;
        a3.iter().map(|z| sums.get(f.sub(eq.d, f.mul(eq.c, z)))).sum()
    } else {
        let c_inv = f.mod_inverse(eq.c)?;
        let mut count = 0u64;
        for x in a1.iter() {
            let rest = f.sub(eq.d, f.mul(eq.a, x));
            for y in a2.iter() {
                if a3.contains(f.mul(f.sub(rest, f.mul(eq.b, y)), c_inv)) {
                    count += 1;
                }
            }
        }
        count
    };
    Ok(SolutionCount { equation: 0, count, expected })
}

/// `count_solutions(eq, A, A, A)` for every equation, in family order.
pub fn family_counts(a: &ResidueSet, family: &EquationFamily) -> Result<Vec<SolutionCount>> {
    check_fields(a.field(), family.field())?;
    family
        .equations()
        .par_iter()
        .enumerate()
        .map(|(i, eq)| count_solutions(eq, a, a, a).map(|c| SolutionCount { equation: i, ..c }))
        .collect()
}

fn has_solution(field: PrimeField, eq: &AffineEquation, a: &ResidueSet, mask: &[bool]) -> bool {
    let c_inv = field.mod_inverse(eq.c).expect("nonzero coefficient");
    // y -> -b y / c, so each pair costs one addition and one lookup
    let ys: Vec<u64> = a.iter().map(|y| field.neg(field.mul(field.mul(eq.b, y), c_inv))).collect();
    a.iter().any(|x| {
        let base = field.mul(field.sub(eq.d, field.mul(eq.a, x)), c_inv);
        ys.iter().any(|&y| mask[field.add(base, y) as usize])
    })
}

/// No equation of the family has a solution in `A^3`.
pub fn avoids(a: &ResidueSet, family: &EquationFamily) -> Result<bool> {
    check_fields(a.field(), family.field())?;
    let f = a.field();
    let mask = a.indicator();
    Ok(!family.equations().par_iter().any(|eq| has_solution(f, eq, a, &mask)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityConstruction {
    pub set: ResidueSet,
    pub family: EquationFamily,
}

/// Odd residues below `p/q` together with the equations `z = i x + j y` for
/// even `i, j <= q/2`: the right side is even and below `p` as an integer
/// while `z` is odd, so no solution exists.
pub fn construct_parity_set(field: PrimeField, q: u64) -> Result<ParityConstruction> {
    check_parity_q(field, q)?;
    let p = field.p();
    let set = ResidueSet::new(field, (1..).step_by(2).take_while(|&x| x * q < p));
    let family = build_family(field, &FamilyKind::Parity { q })?;
    Ok(ParityConstruction { set, family })
}

/// Sets avoiding a fixed family.
struct AvoidingConstraint<'a> {
    field: PrimeField,
    equations: &'a [AffineEquation],
    inverses: Vec<(u64, u64)>,
    homogeneous: bool,
}

impl<'a> AvoidingConstraint<'a> {
    fn new(family: &'a EquationFamily) -> Self {
        let field = family.field();
        let inverses = family
            .equations()
            .iter()
            .map(|e| (field.mod_inverse(e.b).expect("nonzero"), field.mod_inverse(e.c).expect("nonzero")))
            .collect();
        AvoidingConstraint {
            field,
            equations: family.equations(),
            inverses,
            homogeneous: family.is_homogeneous(),
        }
    }
}

impl Constraint for AvoidingConstraint<'_> {
    fn field(&self) -> PrimeField {
        self.field
    }

    fn symmetry(&self) -> Symmetry {
        if self.homogeneous {
            Symmetry::Dilation
        } else {
            Symmetry::None
        }
    }

    fn admits(&self, member: &[bool], set: &[u64], x: u64) -> bool {
        let f = self.field;
        let inside = |v: u64| v == x || member[v as usize];
        for (eq, &(b_inv, c_inv)) in self.equations.iter().zip(&self.inverses) {
            let ax = f.mul(eq.a, x);
            let bx = f.mul(eq.b, x);
            let cx = f.mul(eq.c, x);
            // x in the first slot
            let rest = f.sub(eq.d, ax);
            if inside(f.mul(f.sub(rest, bx), c_inv)) {
                return false;
            }
            for &w in set {
                let aw = f.mul(eq.a, w);
                // x first, w second
                if inside(f.mul(f.sub(rest, f.mul(eq.b, w)), c_inv)) {
                    return false;
                }
                // w first, x second
                if inside(f.mul(f.sub(f.sub(eq.d, aw), bx), c_inv)) {
                    return false;
                }
                // w first, x third
                if member[f.mul(f.sub(f.sub(eq.d, aw), cx), b_inv) as usize] {
                    return false;
                }
            }
        }
        true
    }
}

/// Largest set avoiding the family (exhaustive) or a valid avoiding witness.
pub fn max_avoiding(family: &EquationFamily, options: &SearchOptions) -> Result<SearchOutcome> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    search::search(&AvoidingConstraint::new(family), options)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Below,
    Typical,
    Above,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationRow {
    pub equation: usize,
    pub count: u64,
    /// `|A|^3 / (4p)`.
    pub low: Fraction,
    /// `2 |A|^3 / p`.
    pub high: Fraction,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub rows: Vec<DeviationRow>,
    pub below: usize,
    pub typical: usize,
    pub above: usize,
}

/// Classifies each equation's solution count against the thresholds at which
/// the avoiding-set arguments still apply.
pub fn deviation_regime(family: &EquationFamily, a: &ResidueSet) -> Result<DeviationReport> {
    let cube = (a.len() as i128).pow(3);
    let p = family.field().p() as i128;
    let low = Fraction::new(cube, 4 * p);
    let high = Fraction::new(2 * cube, p);
    let rows: Vec<DeviationRow> = family_counts(a, family)?
        .into_iter()
        .map(|c| {
            let n = c.count as i128;
            let regime = if low.cmp_integer(n).is_ge() {
                Regime::Below
            } else if high.cmp_integer(n).is_le() {
                Regime::Above
            } else {
                Regime::Typical
            };
            DeviationRow { equation: c.equation, count: c.count, low, high, regime }
        })
        .collect();
    let tally = |r: Regime| rows.iter().filter(|row| row.regime == r).count();
    Ok(DeviationReport {
        below: tally(Regime::Below),
        typical: tally(Regime::Typical),
        above: tally(Regime::Above),
        rows,
    })
}

/// What plays the role of `t` in a threshold `p / t^kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogParameter {
    /// `|E|`.
    FamilySize,
    /// `T(E)`.
    T,
    /// `T*(E)`.
    TStar,
    /// Order of a non-averaging set.
    Order,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundDirection {
    /// Every admissible set is at most a constant times the threshold.
    Upper,
    /// Some admissible set is at least a constant times the threshold.
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCatalogEntry {
    pub name: String,
    pub kappa: Fraction,
    pub parameter: CatalogParameter,
    pub direction: BoundDirection,
    pub hypothesis: String,
    pub source: String,
}

fn entry(
    name: &str,
    kappa: (i128, i128),
    parameter: CatalogParameter,
    direction: BoundDirection,
    hypothesis: &str,
    source: &str,
) -> BoundCatalogEntry {
    BoundCatalogEntry {
        name: name.into(),
        kappa: Fraction::new(kappa.0, kappa.1),
        parameter,
        direction,
        hypothesis: hypothesis.into(),
        source: source.into(),
    }
}

/// Exponents from the literature on avoiding and non-averaging sets. Upper
/// bounds hold for every `kappa` strictly below the listed value, with
/// unspecified constants.
pub fn bound_catalog() -> Vec<BoundCatalogEntry> {
    use BoundDirection::*;
    use CatalogParameter::*;
    vec![
        entry(
            "unique-attribute-family",
            (3, 20),
            FamilySize,
            Upper,
            "|A| >> p^(39/47); each point has a unique abscissa, ordinate or ratio",
            "avoiding-intro-upper",
        ),
        entry("matching-invariant", (10, 31), T, Upper, "|A| >> p^(39/47)", "avoiding-matching-upper"),
        entry("star-invariant", (3, 10), TStar, Upper, "|A| >> p^(39/47)", "avoiding-star-upper"),
        entry(
            "star-invariant-energy",
            (35, 159),
            TStar,
            Upper,
            "|A| >> p^(7/9), T*(E) < p^(2/3); threshold carries the factor (E+*(A)/|A|^3)^(22/159)",
            "avoiding-star-energy-upper",
        ),
        entry(
            "star-invariant-energy-alt",
            (69, 183),
            TStar,
            Upper,
            "|A| >> p^(7/9), T*(E) < p^(2/3); second branch of the maximum",
            "avoiding-star-energy-upper",
        ),
        entry("family-size", (5, 31), FamilySize, Upper, "|A| >> p^(39/47)", "avoiding-family-size-upper"),
        entry(
            "fourier-direct",
            (1, 3),
            FamilySize,
            Upper,
            "each point has a unique abscissa, ordinate or ratio; any field",
            "avoiding-fourier-direct-upper",
        ),
        entry("non-averaging", (2, 3), Order, Upper, "A non-averaging of order t", "non-averaging-upper"),
        entry("parity-construction", (1, 2), FamilySize, Lower, "explicit construction", "avoiding-parity-lower"),
    ]
}

pub fn catalog_entry(name: &str) -> Option<BoundCatalogEntry> {
    bound_catalog().into_iter().find(|e| e.name == name)
}

/// `p / t^kappa`; a reference scale only, the constants are unknown.
pub fn bound_threshold(entry: &BoundCatalogEntry, p: u64, t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::BadParameter("t must be positive".into()));
    }
    Ok(p as f64 / (t as f64).powf(entry.kappa.to_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn single(f: PrimeField, a: i64, b: i64, c: i64, d: i64) -> EquationFamily {
        EquationFamily::new(f, vec![AffineEquation::from_signed(f, a, b, c, d).unwrap()]).unwrap()
    }

    #[test]
    fn count_examples() {
        let f = field(7);
        let g = ResidueSet::new(f, [1, 2, 4]);
        let eq = AffineEquation::from_signed(f, 1, 1, -1, 0).unwrap();
        let c = count_solutions(&eq, &g, &g, &g).unwrap();
        assert_eq!(c.count, 3);
        assert_eq!(c.expected, Fraction::new(27, 7));

        let full = ResidueSet::full(f);
        let eq2 = AffineEquation::new(f, 3, 5, 2, 4).unwrap();
        assert_eq!(count_solutions(&eq2, &full, &full, &full).unwrap().count, 49);
        let empty = ResidueSet::empty(f);
        assert_eq!(count_solutions(&eq2, &full, &empty, &full).unwrap().count, 0);

        let other = ResidueSet::full(field(5));
        assert!(matches!(count_solutions(&eq, &g, &other, &g), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn convolution_path_matches_scan() {
        let f = field(211);
        let a: ResidueSet = ResidueSet::new(f, (0..211).filter(|x| x % 3 != 1));
        let b = ResidueSet::new(f, (0..211).filter(|x| x % 5 < 3));
        let eq = AffineEquation::new(f, 7, 19, 3, 11).unwrap();
        assert!(use_convolution(211, a.len(), b.len()));
        let fast = count_solutions(&eq, &a, &b, &a).unwrap().count;
        let c_inv = f.mod_inverse(3).unwrap();
        let mut slow = 0;
        for x in a.iter() {
            for y in b.iter() {
                let z = f.mul(f.sub(f.sub(11, f.mul(7, x)), f.mul(19, y)), c_inv);
                slow += a.contains(z) as u64;
            }
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn avoids_examples() {
        let f = field(7);
        let fam = single(f, 1, 1, -1, 0);
        assert!(avoids(&ResidueSet::empty(f), &fam).unwrap());
        assert!(!avoids(&ResidueSet::new(f, [1, 2, 4]), &fam).unwrap());
        assert!(avoids(&ResidueSet::new(f, [1, 3]), &fam).unwrap());
    }

    #[test]
    fn parity_examples() {
        let c = construct_parity_set(field(101), 8).unwrap();
        assert_eq!(c.set, ResidueSet::new(field(101), [1, 3, 5, 7, 9, 11]));
        assert_eq!(c.family.len(), 4);
        assert!(avoids(&c.set, &c.family).unwrap());
        assert!(matches!(construct_parity_set(field(101), 3), Err(Error::BadParameter(_))));

        let c = construct_parity_set(field(10007), 16).unwrap();
        assert!(c.set.len() as f64 >= 10007.0 / 32.0 - 1.0);
        assert!(avoids(&c.set, &c.family).unwrap());
    }

    #[test]
    fn max_avoiding_examples() {
        let f = field(5);
        let out = max_avoiding(&single(f, 1, 1, -1, 0), &SearchOptions::exhaustive()).unwrap();
        assert_eq!(out.size, 2);
        assert!(avoids(&out.witness, &single(f, 1, 1, -1, 0)).unwrap());
        let out = max_avoiding(&single(f, 1, 1, 1, 0), &SearchOptions::exhaustive()).unwrap();
        assert_eq!(out.size, 2);
        let empty = EquationFamily::new(f, vec![]).unwrap();
        assert_eq!(max_avoiding(&empty, &SearchOptions::exhaustive()).unwrap_err(), Error::EmptyFamily);
    }

    #[test]
    fn inhomogeneous_search() {
        // x + y + z = 1 has no dilation symmetry
        let f = field(7);
        let fam = single(f, 1, 1, 1, 1);
        let out = max_avoiding(&fam, &SearchOptions::exhaustive()).unwrap();
        let naive = (0u32..1 << 7)
            .map(|m| ResidueSet::new(f, (0..7).filter(|i| m >> i & 1 == 1)))
            .filter(|s| avoids(s, &fam).unwrap())
            .map(|s| s.len())
            .max()
            .unwrap();
        assert_eq!(out.size, naive);
        assert!(avoids(&out.witness, &fam).unwrap());
    }

    #[test]
    fn cube_root_family_has_only_empty_avoiders() {
        // 1 + g + g^2 = 0 for g of order 3, so x = y = z solves g x + g^2 y + z = 0
        let fam = build_family(field(13), &FamilyKind::Subgroup { order: 3 }).unwrap();
        let out = max_avoiding(&fam, &SearchOptions::exhaustive()).unwrap();
        assert_eq!(out.size, 0);
        assert!(out.witness.is_empty());
    }

    #[test]
    fn heuristic_modes_are_valid_and_seeded() {
        let f = field(97);
        let fam = build_family(f, &FamilyKind::Subgroup { order: 4 }).unwrap();
        for opts in [SearchOptions::greedy(5), SearchOptions::randomized(5, 8)] {
            let out = max_avoiding(&fam, &opts).unwrap();
            assert!(out.size > 0);
            assert!(avoids(&out.witness, &fam).unwrap());
            assert_eq!(out, max_avoiding(&fam, &opts).unwrap());
        }
    }

    #[test]
    fn regime_examples() {
        let f = field(7);
        let fam = single(f, 1, 1, -1, 0);
        let r = deviation_regime(&fam, &ResidueSet::new(f, [1, 2, 4])).unwrap();
        assert_eq!(r.rows[0].count, 3);
        assert_eq!(r.rows[0].low, Fraction::new(27, 28));
        assert_eq!(r.rows[0].high, Fraction::new(54, 7));
        assert_eq!(r.rows[0].regime, Regime::Typical);

        let full = deviation_regime(&fam, &ResidueSet::full(f)).unwrap();
        assert_eq!(full.rows[0].count, 49);
        assert_eq!(full.typical, 1);

        let r = deviation_regime(&fam, &ResidueSet::new(f, [1, 3])).unwrap();
        assert_eq!(r.below, 1);
    }

    #[test]
    fn thresholds() {
        let half = catalog_entry("parity-construction").unwrap();
        assert_eq!(bound_threshold(&half, 100, 4).unwrap(), 50.0);
        let na = catalog_entry("non-averaging").unwrap();
        assert!((bound_threshold(&na, 1000, 8).unwrap() - 250.0).abs() < 1e-9);
        let m = catalog_entry("matching-invariant").unwrap();
        assert_eq!(bound_threshold(&m, 101, 1).unwrap(), 101.0);
        assert!(bound_threshold(&m, 101, 0).is_err());
        for e in bound_catalog() {
            assert!(e.kappa.cmp_integer(0).is_gt() && e.kappa.cmp_integer(1).is_le());
        }
    }
}
