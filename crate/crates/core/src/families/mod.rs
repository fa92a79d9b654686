//! Families of equations `a x + b y + c z = d`, their projective point sets
//! `S(E)`, and the invariants `T(E)` and `T*(E)`.
//!
//! A family is stored together with the canonical point `(a/c, b/c)` of every
//! equation. Both invariants are evaluated in each of the three coordinate
//! normalizations (divide by `a`, `b` or `c`) and the maximum is reported.
//!
//! `T*` follows the reading "each chosen point has a unique abscissa, or a
//! unique ordinate, or a unique ratio abscissa/ordinate within the chosen
//! subset". That property is hereditary, which the exact search relies on.

pub mod format;
mod matching;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpcore::{PrimeField, ResidueSet};

/// Largest family accepted by the exact `T*` search.
pub const EXACT_TSTAR_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineEquation {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl AffineEquation {
    pub fn new(field: PrimeField, a: u64, b: u64, c: u64, d: u64) -> Result<Self> {
        let (a, b, c, d) = (field.reduce(a), field.reduce(b), field.reduce(c), field.reduce(d));
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::ZeroCoefficient);
        }
        Ok(AffineEquation { a, b, c, d })
    }

    pub fn from_signed(field: PrimeField, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(
            field,
            field.reduce_signed(a),
            field.reduce_signed(b),
            field.reduce_signed(c),
            field.reduce_signed(d),
        )
    }

    /// `a x + b y + c z` evaluated in `F_p`.
    #[inline]
    pub fn lhs(&self, field: PrimeField, x: u64, y: u64, z: u64) -> u64 {
        field.add(field.add(field.mul(self.a, x), field.mul(self.b, y)), field.mul(self.c, z))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.d == 0
    }
}

impl fmt::Display for AffineEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y + {}z = {}", self.a, self.b, self.c, self.d)
    }
}

/// One of the three affine charts `{x = 1}`, `{y = 1}`, `{z = 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    X,
    Y,
    Z,
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::X, Plane::Y, Plane::Z];

    /// The two non-fixed coordinates of `eq` in this chart.
    pub fn normalize(self, field: PrimeField, eq: &AffineEquation) -> (u64, u64) {
        let (pivot, u, v) = match self {
            Plane::X => (eq.a, eq.b, eq.c),
            Plane::Y => (eq.b, eq.a, eq.c),
            Plane::Z => (eq.c, eq.a, eq.b),
        };
        let inv = field.mod_inverse(pivot).expect("coefficients are nonzero");
        (field.mul(u, inv), field.mul(v, inv))
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Plane::X => "x",
            Plane::Y => "y",
            Plane::Z => "z",
        })
    }
}

/// Canonical representative `(a, b, 1)` of a projective class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjectivePoint {
    pub a: u64,
    pub b: u64,
}

pub fn canonicalize(field: PrimeField, eq: &AffineEquation) -> Result<ProjectivePoint> {
    if eq.a.is_multiple_of(field.p()) || eq.b.is_multiple_of(field.p()) || eq.c.is_multiple_of(field.p()) {
        return Err(Error::ZeroCoefficient);
    }
    let (a, b) = Plane::Z.normalize(field, eq);
    Ok(ProjectivePoint { a, b })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationFamily {
    field: PrimeField,
    equations: Vec<AffineEquation>,
    points: Vec<ProjectivePoint>,
}

impl EquationFamily {
    /// Rejects proportional duplicates; positions in the error are 1-based.
    pub fn new(field: PrimeField, equations: Vec<AffineEquation>) -> Result<Self> {
        Self::with_labels(field, equations, |i| i + 1)
    }

    pub(crate) fn with_labels(
        field: PrimeField,
        equations: Vec<AffineEquation>,
        label: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let mut seen: HashMap<ProjectivePoint, usize> = HashMap::new();
        let mut points = Vec::with_capacity(equations.len());
        for (i, eq) in equations.iter().enumerate() {
            let pt = canonicalize(field, eq)?;
            if let Some(&j) = seen.get(&pt) {
                return Err(Error::DuplicateEquation { first: label(j), second: label(i) });
            }
            seen.insert(pt, i);
            points.push(pt);
        }
        Ok(EquationFamily { field, equations, points })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn equations(&self) -> &[AffineEquation] {
        &self.equations
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Every right-hand side is zero, so avoiding sets are closed under dilation.
    pub fn is_homogeneous(&self) -> bool {
        self.equations.iter().all(AffineEquation::is_homogeneous)
    }

    /// Coordinates of every equation in the given chart, indexed like the equations.
    pub fn coordinates(&self, plane: Plane) -> Vec<(u64, u64)> {
        self.equations.iter().map(|eq| plane.normalize(self.field, eq)).collect()
    }

    /// `|{ x / y : (x, y, 1) in S(E) }|` in the given chart.
    pub fn ratio_count(&self, plane: Plane) -> usize {
        let field = self.field;
        let mut ratios: Vec<u64> = self
            .coordinates(plane)
            .into_iter()
            .map(|(x, y)| field.mul(x, field.mod_inverse(y).expect("nonzero")))
            .collect();
        ratios.sort_unstable();
        ratios.dedup();
        ratios.len()
    }

    pub fn subfamily(&self, indices: &[usize]) -> EquationFamily {
        EquationFamily {
            field: self.field,
            equations: indices.iter().map(|&i| self.equations[i]).collect(),
            points: indices.iter().map(|&i| self.points[i]).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    T,
    TStar,
}

/// A subset of the equations of a family, read in one chart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSubset {
    pub plane: Plane,
    pub indices: Vec<usize>,
    pub kind: WitnessKind,
}

impl WitnessSubset {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantValue {
    pub value: usize,
    pub witness: WitnessSubset,
}

/// Checks a witness against its defining property.
pub fn verify_witness(family: &EquationFamily, witness: &WitnessSubset) -> bool {
    let mut idx = witness.indices.clone();
    idx.sort_unstable();
    idx.dedup();
    if idx.len() != witness.indices.len() || idx.iter().any(|&i| i >= family.len()) {
        return false;
    }
    let coords = family.coordinates(witness.plane);
    let pts: Vec<(u64, u64)> = idx.iter().map(|&i| coords[i]).collect();
    match witness.kind {
        WitnessKind::T => {
            let mut xs: Vec<u64> = pts.iter().map(|p| p.0).collect();
            let mut ys: Vec<u64> = pts.iter().map(|p| p.1).collect();
            xs.sort_unstable();
            xs.dedup();
            ys.sort_unstable();
            ys.dedup();
            xs.len() == pts.len() && ys.len() == pts.len()
        }
        WitnessKind::TStar => {
            let field = family.field;
            let ratio = |(x, y): (u64, u64)| field.mul(x, field.mod_inverse(y).expect("nonzero"));
            pts.iter().enumerate().all(|(j, &pj)| {
                let others = || pts.iter().enumerate().filter(move |&(i, _)| i != j).map(|(_, &q)| q);
                others().all(|q| q.0 != pj.0)
                    || others().all(|q| q.1 != pj.1)
                    || others().all(|q| ratio(q) != ratio(pj))
            })
        }
    }
}

fn require_nonempty(family: &EquationFamily) -> Result<()> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    Ok(())
}

/// Maps values to dense ids `0..k`.
fn compress(values: impl Iterator<Item = u64>) -> (Vec<usize>, usize) {
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let out = values
        .map(|v| {
            let next = ids.len();
            *ids.entry(v).or_insert(next)
        })
        .collect();
    (out, ids.len())
}

/// `T` in one chart: a maximum matching between abscissas and ordinates.
pub fn t_invariant_in_plane(family: &EquationFamily, plane: Plane) -> WitnessSubset {
    let coords = family.coordinates(plane);
    let (xs, nx) = compress(coords.iter().map(|c| c.0));
    let (ys, ny) = compress(coords.iter().map(|c| c.1));
    let edges: Vec<(usize, usize)> = xs.into_iter().zip(ys).collect();
    let indices = matching::maximum_matching(nx, ny, &edges);
    WitnessSubset { plane, indices, kind: WitnessKind::T }
}

fn best_over_planes(mut per_plane: impl FnMut(Plane) -> Result<WitnessSubset>) -> Result<InvariantValue> {
    let mut best: Option<WitnessSubset> = None;
    for plane in Plane::ALL {
        let w = per_plane(plane)?;
        if best.as_ref().is_none_or(|b| w.len() > b.len()) {
            best = Some(w);
        }
    }
    let witness = best.expect("three planes");
    Ok(InvariantValue { value: witness.len(), witness })
}

/// `T(E)`: the largest subset with pairwise distinct non-fixed coordinates in
/// one of the three charts.
pub fn t_invariant(family: &EquationFamily) -> Result<InvariantValue> {
    require_nonempty(family)?;
    best_over_planes(|plane| Ok(t_invariant_in_plane(family, plane)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TStarMode {
    Exact,
    Greedy,
}

/// `T*(E)`, maximized over the three charts.
pub fn t_star_invariant(family: &EquationFamily, mode: TStarMode) -> Result<InvariantValue> {
    require_nonempty(family)?;
    best_over_planes(|plane| t_star_in_plane(family, plane, mode))
}

/// `T*` restricted to one chart.
pub fn t_star_in_plane(family: &EquationFamily, plane: Plane, mode: TStarMode) -> Result<WitnessSubset> {
    require_nonempty(family)?;
    let indices = match mode {
        TStarMode::Exact => {
            if family.len() > EXACT_TSTAR_LIMIT {
                return Err(Error::BudgetExceeded(format!(
                    "exact T* needs |E| <= {EXACT_TSTAR_LIMIT}, got {}",
                    family.len()
                )));
            }
            exact_t_star(family, plane)
        }
        TStarMode::Greedy => line_pair_witness(family, plane),
    };
    Ok(WitnessSubset { plane, indices, kind: WitnessKind::TStar })
}

/// The column through the most popular abscissa together with the row through
/// the most popular ordinate (smallest value on ties). Every point of the union
/// has a unique abscissa, ordinate or ratio: the shared corner is the only
/// point with ratio `x*/y*`.
fn line_pair_witness(family: &EquationFamily, plane: Plane) -> Vec<usize> {
    let coords = family.coordinates(plane);
    let popular = |key: fn(&(u64, u64)) -> u64| -> u64 {
        let mut counts: HashMap<u64, usize> = HashMap::new();
        for c in &coords {
            *counts.entry(key(c)).or_default() += 1;
        }
        counts
            .into_iter()
            .max_by(|l, r| l.1.cmp(&r.1).then(r.0.cmp(&l.0)))
            .map(|(v, _)| v)
            .expect("nonempty")
    };
    let x_star = popular(|c| c.0);
    let y_star = popular(|c| c.1);
    (0..coords.len())
        .filter(|&i| coords[i].0 == x_star || coords[i].1 == y_star)
        .collect()
}

struct TStarSearch {
    xs: Vec<usize>,
    ys: Vec<usize>,
    rs: Vec<usize>,
    cx: Vec<usize>,
    cy: Vec<usize>,
    cr: Vec<usize>,
    chosen: Vec<usize>,
    best: Vec<usize>,
}

impl TStarSearch {
    fn push(&mut self, i: usize) {
        self.cx[self.xs[i]] += 1;
        self.cy[self.ys[i]] += 1;
        self.cr[self.rs[i]] += 1;
        self.chosen.push(i);
    }

    fn pop(&mut self) {
        let i = self.chosen.pop().expect("nonempty");
        self.cx[self.xs[i]] -= 1;
        self.cy[self.ys[i]] -= 1;
        self.cr[self.rs[i]] -= 1;
    }

    fn valid(&self) -> bool {
        self.chosen
            .iter()
            .all(|&j| self.cx[self.xs[j]] == 1 || self.cy[self.ys[j]] == 1 || self.cr[self.rs[j]] == 1)
    }

    fn run(&mut self, next: usize) {
        let n = self.xs.len();
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if next == n || self.chosen.len() + (n - next) <= self.best.len() {
            return;
        }
        self.push(next);
        if self.valid() {
            self.run(next + 1);
        }
        self.pop();
        self.run(next + 1);
    }
}

/// Branch and bound over include/exclude decisions; only valid partial sets are
/// extended since the property is closed under removal.
fn exact_t_star(family: &EquationFamily, plane: Plane) -> Vec<usize> {
    let field = family.field;
    let coords = family.coordinates(plane);
    let (xs, nx) = compress(coords.iter().map(|c| c.0));
    let (ys, ny) = compress(coords.iter().map(|c| c.1));
    let (rs, nr) = compress(
        coords
            .iter()
            .map(|&(x, y)| field.mul(x, field.mod_inverse(y).expect("nonzero"))),
    );
    let mut search = TStarSearch {
        xs,
        ys,
        rs,
        cx: vec![0; nx],
        cy: vec![0; ny],
        cr: vec![0; nr],
        chosen: Vec::new(),
        best: line_pair_witness(family, plane),
    };
    search.run(0);
    let mut best = search.best;
    best.sort_unstable();
    best
}

/// A `T`-type witness of size at least `ceil(sqrt |E|)`: a maximum
/// distinct-coordinates subset in the chart `z = 1`, or the longest column
/// (read in the chart `y = 1`) or row (read in `x = 1`), whichever is larger.
///
/// The first phase must be a maximum matching, not merely a maximal one:
/// the points form a bipartite graph with `|E|` edges whose edges split into
/// `Δ` matchings (`Δ` the longest line), so `ν Δ >= |E|`. A greedy maximal
/// subset only reaches about `sqrt(|E| / 2)`.
pub fn greedy_t_witness(family: &EquationFamily) -> Result<WitnessSubset> {
    require_nonempty(family)?;
    let coords = family.coordinates(Plane::Z);
    let matched = t_invariant_in_plane(family, Plane::Z).indices;
    let mut columns: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut rows: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, &(x, y)) in coords.iter().enumerate() {
        columns.entry(x).or_default().push(i);
        rows.entry(y).or_default().push(i);
    }
    let longest = |lines: HashMap<u64, Vec<usize>>| {
        lines
            .into_iter()
            .max_by(|l, r| l.1.len().cmp(&r.1.len()).then(r.0.cmp(&l.0)))
            .map(|(_, v)| v)
            .unwrap_or_default()
    };
    // (x0, q, 1) ~ (x0/q, 1, 1/q): distinct coordinates in the chart y = 1
    let column = longest(columns);
    // (x, y0, 1) ~ (1, y0/x, 1/x): distinct coordinates in the chart x = 1
    let row = longest(rows);
    let mut out = WitnessSubset { plane: Plane::Z, indices: matched, kind: WitnessKind::T };
    if column.len() > out.len() {
        out = WitnessSubset { plane: Plane::Y, indices: column, kind: WitnessKind::T };
    }
    if row.len() > out.len() {
        out = WitnessSubset { plane: Plane::X, indices: row, kind: WitnessKind::T };
    }
    Ok(out)
}

/// Parametrized constructions of families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// `g1 x + g2 y + z = 0` for `g1, g2` in the subgroup of order `order`.
    Subgroup { order: u64 },
    /// `g x + g y - z = 0` for `g` in the subgroup of order `order`.
    GammaShift { order: u64 },
    /// `x + y + l z = 0` for each nonzero `l`.
    Lambda { lambdas: Vec<u64> },
    /// `-i x - j y + z = 0` over even `i, j <= q/2`.
    Parity { q: u64 },
    /// Coefficients `(a, b, c, d)` given directly.
    Explicit { equations: Vec<(i64, i64, i64, i64)> },
}

pub fn build_family(field: PrimeField, kind: &FamilyKind) -> Result<EquationFamily> {
    let eqs: Vec<AffineEquation> = match kind {
        FamilyKind::Subgroup { order } => {
            let g = field.multiplicative_subgroup(*order)?;
            let mut out = Vec::with_capacity(g.len() * g.len());
            for g1 in g.iter() {
                for g2 in g.iter() {
                    out.push(AffineEquation::new(field, g1, g2, 1, 0)?);
                }
            }
            out
        }
        FamilyKind::GammaShift { order } => {
            let g = field.multiplicative_subgroup(*order)?;
            g.iter()
                .map(|x| AffineEquation::new(field, x, x, field.neg(1), 0))
                .collect::<Result<_>>()?
        }
        FamilyKind::Lambda { lambdas } => {
            let set = ResidueSet::new(field, lambdas.iter().copied());
            if set.contains(0) {
                return Err(Error::BadParameter("lambda must be nonzero".into()));
            }
            set.iter()
                .map(|l| AffineEquation::new(field, 1, 1, l, 0))
                .collect::<Result<_>>()?
        }
        FamilyKind::Parity { q } => {
            check_parity_q(field, *q)?;
            let evens: Vec<u64> = (2..=q / 2).step_by(2).collect();
            let mut out = Vec::with_capacity(evens.len() * evens.len());
            for &i in &evens {
                for &j in &evens {
                    out.push(AffineEquation::new(field, field.neg(i), field.neg(j), 1, 0)?);
                }
            }
            out
        }
        FamilyKind::Explicit { equations } => equations
            .iter()
            .map(|&(a, b, c, d)| AffineEquation::from_signed(field, a, b, c, d))
            .collect::<Result<_>>()?,
    };
    EquationFamily::new(field, eqs)
}

pub(crate) fn check_parity_q(field: PrimeField, q: u64) -> Result<()> {
    if !q.is_multiple_of(2) || q < 4 || q.saturating_mul(q) >= field.p() {
        return Err(Error::BadParameter(format!(
            "parity construction needs q even with 4 <= q and q^2 < p, got q = {q}, p = {}",
            field.p()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn eq(f: PrimeField, a: u64, b: u64, c: u64) -> AffineEquation {
        AffineEquation::new(f, a, b, c, 0).unwrap()
    }

    #[test]
    fn canonical_points() {
        let f7 = field(7);
        let e = AffineEquation::new(f7, 2, 4, 6, 3).unwrap();
        assert_eq!(canonicalize(f7, &e).unwrap(), ProjectivePoint { a: 5, b: 3 });
        assert_eq!(canonicalize(f7, &eq(f7, 3, 5, 1)).unwrap(), ProjectivePoint { a: 3, b: 5 });
        assert_eq!(
            canonicalize(f7, &eq(f7, 2, 4, 6)).unwrap(),
            canonicalize(f7, &eq(f7, 4, 1, 5)).unwrap()
        );
        assert_ne!(
            canonicalize(f7, &eq(f7, 2, 4, 6)).unwrap(),
            canonicalize(f7, &eq(f7, 4, 1, 6)).unwrap()
        );
        assert_eq!(AffineEquation::new(f7, 0, 1, 1, 0), Err(Error::ZeroCoefficient));
        assert_eq!(AffineEquation::new(f7, 1, 7, 1, 0), Err(Error::ZeroCoefficient));
    }

    #[test]
    fn charts_are_scale_invariant() {
        let f = field(13);
        let e = eq(f, 3, 7, 11);
        let scaled = eq(f, 6, 14, 22);
        for plane in Plane::ALL {
            assert_eq!(plane.normalize(f, &e), plane.normalize(f, &scaled));
        }
        assert_eq!(Plane::X.normalize(f, &eq(f, 1, 4, 9)), (4, 9));
        assert_eq!(Plane::Y.normalize(f, &eq(f, 4, 1, 9)), (4, 9));
    }

    #[test]
    fn proportional_duplicates_rejected() {
        let f7 = field(7);
        let err = EquationFamily::new(f7, vec![eq(f7, 1, 1, 1), eq(f7, 2, 4, 6), eq(f7, 4, 1, 5)]);
        assert_eq!(err.unwrap_err(), Error::DuplicateEquation { first: 2, second: 3 });
    }

    fn diagonal_family(p: u64, t: u64) -> EquationFamily {
        let f = field(p);
        EquationFamily::new(f, (1..=t).map(|e| eq(f, 1, e, e)).collect()).unwrap()
    }

    #[test]
    fn t_examples() {
        let fam = diagonal_family(11, 4);
        let t = t_invariant(&fam).unwrap();
        assert_eq!(t.value, 4);
        assert!(verify_witness(&fam, &t.witness));

        let sub = build_family(field(7), &FamilyKind::Subgroup { order: 3 }).unwrap();
        assert_eq!(sub.len(), 9);
        let t = t_invariant(&sub).unwrap();
        assert_eq!(t.value, 3);
        assert!(verify_witness(&sub, &t.witness));

        let single = diagonal_family(11, 1);
        assert_eq!(t_invariant(&single).unwrap().value, 1);
        assert_eq!(
            t_invariant(&EquationFamily::new(field(11), vec![]).unwrap()).unwrap_err(),
            Error::EmptyFamily
        );
    }

    #[test]
    fn t_star_examples() {
        let f = field(11);
        let fam = EquationFamily::new(f, (1..=5).map(|c| eq(f, 1, 1, c)).collect()).unwrap();
        let t = t_star_invariant(&fam, TStarMode::Exact).unwrap();
        assert_eq!(t.value, 5);
        assert!(verify_witness(&fam, &t.witness));

        let sub = build_family(field(7), &FamilyKind::Subgroup { order: 3 }).unwrap();
        let g = t_star_invariant(&sub, TStarMode::Greedy).unwrap();
        assert_eq!(g.value, 5);
        assert!(verify_witness(&sub, &g.witness));
        let exact = t_star_invariant(&sub, TStarMode::Exact).unwrap();
        assert!(exact.value >= g.value && exact.value <= 9);
        assert!(verify_witness(&sub, &exact.witness));

        let single = diagonal_family(11, 1);
        assert_eq!(t_star_invariant(&single, TStarMode::Exact).unwrap().value, 1);
        assert_eq!(t_star_invariant(&single, TStarMode::Greedy).unwrap().value, 1);
    }

    #[test]
    fn exact_t_star_budget() {
        let f = field(101);
        let fam = EquationFamily::new(f, (1..=25).map(|c| eq(f, 1, c, 1)).collect()).unwrap();
        assert!(matches!(
            t_star_invariant(&fam, TStarMode::Exact),
            Err(Error::BudgetExceeded(_))
        ));
        assert_eq!(t_star_invariant(&fam, TStarMode::Greedy).unwrap().value, 25);
    }

    #[test]
    fn greedy_t_examples() {
        let fam = diagonal_family(11, 4);
        let w = greedy_t_witness(&fam).unwrap();
        assert_eq!(w.len(), 4);
        assert!(verify_witness(&fam, &w));

        let sub = build_family(field(7), &FamilyKind::Subgroup { order: 3 }).unwrap();
        let w = greedy_t_witness(&sub).unwrap();
        assert!(w.len() >= 3);
        assert!(verify_witness(&sub, &w));

        let single = diagonal_family(11, 1);
        assert_eq!(greedy_t_witness(&single).unwrap().indices, vec![0]);
    }

    #[test]
    fn long_column_is_recoordinatized() {
        // all points share the abscissa in z = 1; only a chart change helps
        let f = field(31);
        let fam = EquationFamily::new(f, (1..=6).map(|b| eq(f, 2, b, 1)).collect()).unwrap();
        let w = greedy_t_witness(&fam).unwrap();
        assert_eq!(w.plane, Plane::Y);
        assert_eq!(w.len(), 6);
        assert!(verify_witness(&fam, &w));
    }

    #[test]
    fn builders() {
        let f7 = field(7);
        let sub = build_family(f7, &FamilyKind::Subgroup { order: 3 }).unwrap();
        assert!(sub.equations().iter().all(|e| e.c == 1 && e.d == 0));

        let f5 = field(5);
        let lam = build_family(f5, &FamilyKind::Lambda { lambdas: vec![1] }).unwrap();
        assert_eq!(lam.equations(), &[eq(f5, 1, 1, 1)]);
        assert!(build_family(f5, &FamilyKind::Lambda { lambdas: vec![0] }).is_err());

        let f101 = field(101);
        let par = build_family(f101, &FamilyKind::Parity { q: 8 }).unwrap();
        let mut got: Vec<(u64, u64)> = par.equations().iter().map(|e| (e.a, e.b)).collect();
        got.sort_unstable();
        assert_eq!(got, vec![(97, 97), (97, 99), (99, 97), (99, 99)]);
        assert!(build_family(f101, &FamilyKind::Parity { q: 3 }).is_err());
        assert!(build_family(f101, &FamilyKind::Parity { q: 12 }).is_err());

        let shift = build_family(f7, &FamilyKind::GammaShift { order: 3 }).unwrap();
        assert_eq!(shift.len(), 3);
        assert!(shift.equations().iter().all(|e| e.a == e.b && e.c == 6));

        assert!(build_family(f7, &FamilyKind::Subgroup { order: 4 }).is_err());
        let ex = build_family(f7, &FamilyKind::Explicit { equations: vec![(1, 1, -1, 0)] }).unwrap();
        assert_eq!(ex.equations()[0].c, 6);
    }

    #[test]
    fn ratio_counts() {
        let sub = build_family(field(7), &FamilyKind::Subgroup { order: 3 }).unwrap();
        // Γ / Γ = Γ
        assert_eq!(sub.ratio_count(Plane::Z), 3);
    }
}
