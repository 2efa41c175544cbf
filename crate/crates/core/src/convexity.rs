//! Exchange-property checkers for integer point sets and objectives.
//!
//! Sets and functions go through the same routine: every lattice point gets
//! a score (0 outside the domain), and an exchange succeeds when both moved
//! points score at least the smaller score of the pair. For a set the scores
//! are membership indicators; for an objective they are ordinal ranks of its
//! values, which makes every verdict invariant under monotone relabeling.

use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Grid, ScoreMap};
use crate::model::{Distribution, School, StudentType};
use crate::objectives::{ObjectiveTable, PolicyGoal, Value};

/// A finite set of points in `Z_{>=0}^dim`, sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<u32>>,
}

impl PointSet {
    pub fn new(dim: usize, points: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        let mut points: Vec<Vec<u32>> = points.into_iter().collect();
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::InvalidGoal(format!(
                "point of dimension {} in a set of dimension {dim}",
                p.len()
            )));
        }
        points.sort_unstable();
        points.dedup();
        Ok(PointSet { dim, points })
    }

    /// Flattens distributions (school-major) into points.
    pub fn from_distributions<'a>(
        dim: usize,
        members: impl IntoIterator<Item = &'a Distribution>,
    ) -> Result<Self> {
        PointSet::new(dim, members.into_iter().map(|d| d.counts().to_vec()))
    }

    pub fn from_goal(goal: &PolicyGoal) -> Self {
        let dim = goal.members()[0].counts().len();
        PointSet::from_distributions(dim, goal.members()).expect("goal members share a shape")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: &[u32]) -> bool {
        self.points.binary_search_by(|p| p.as_slice().cmp(point)).is_ok()
    }
}

/// A pair and pivot coordinate at which the exchange property fails.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConvexityWitness {
    pub xi: Vec<u32>,
    pub xi2: Vec<u32>,
    /// Flat coordinate with `xi[pivot] > xi2[pivot]`.
    pub pivot: usize,
}

impl ConvexityWitness {
    /// Pivot as a (school, type) cell for a grid with `types` columns.
    pub fn pivot_cell(&self, types: usize) -> (School, StudentType) {
        (School(self.pivot / types), StudentType(self.pivot % types))
    }

    /// The pair as distributions of the given shape.
    pub fn as_distributions(&self, schools: usize, types: usize) -> Option<(Distribution, Distribution)> {
        if self.xi.len() != schools * types {
            return None;
        }
        Some((
            Distribution::from_flat(schools, types, self.xi.clone()),
            Distribution::from_flat(schools, types, self.xi2.clone()),
        ))
    }
}

impl fmt::Display for ConvexityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "xi=({}) xi2=({}) pivot={}",
            self.xi.iter().join(","),
            self.xi2.iter().join(","),
            self.pivot
        )
    }
}

/// Outcome of a convexity or concavity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Convexity {
    Holds,
    Fails(ConvexityWitness),
}

impl Convexity {
    pub fn holds(&self) -> bool {
        matches!(self, Convexity::Holds)
    }

    pub fn witness(&self) -> Option<&ConvexityWitness> {
        match self {
            Convexity::Holds => None,
            Convexity::Fails(w) => Some(w),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exchange {
    /// `(c', t')` ranges over coordinates and the null move.
    Natural,
    /// `(c', t')` ranges over coordinates only.
    Strict,
}

/// Lexicographically first `(a, b, pivot)` violating the exchange property,
/// where `a`, `b` range over `points` and scores come from `score`.
fn first_violation<F>(
    points: &[Vec<u32>],
    keys: &[u64],
    own: &[u32],
    grid: &Grid,
    score: F,
    exchange: Exchange,
) -> Convexity
where
    F: Fn(u64) -> u32 + Sync,
{
    let dim = grid.dim();
    let found = (0..points.len()).into_par_iter().find_map_first(|a| {
        let (pa, ka, sa) = (&points[a], keys[a], own[a]);
        for b in 0..points.len() {
            let (pb, kb) = (&points[b], keys[b]);
            let need = sa.min(own[b]);
            for i in 0..dim {
                if pa[i] <= pb[i] {
                    continue;
                }
                let si = grid.stride(i);
                let ok = |x: u64, y: u64| score(x).min(score(y)) >= need;
                let mut rescued = exchange == Exchange::Natural && ok(ka - si, kb + si);
                if !rescued {
                    rescued = (0..dim).any(|j| {
                        pa[j] < pb[j] && {
                            let sj = grid.stride(j);
                            ok(ka + sj - si, kb + si - sj)
                        }
                    });
                }
                if !rescued {
                    return Some(ConvexityWitness {
                        xi: pa.clone(),
                        xi2: pb.clone(),
                        pivot: i,
                    });
                }
            }
        }
        None
    });
    match found {
        Some(w) => Convexity::Fails(w),
        None => Convexity::Holds,
    }
}

fn check_set(set: &PointSet, exchange: Exchange) -> Convexity {
    if set.is_empty() {
        return Convexity::Holds;
    }
    let grid = Grid::enclosing(set.dim(), set.points().iter().map(Vec::as_slice))
        .expect("box of a materialized set fits in u64");
    let keys: Vec<u64> = set
        .points()
        .iter()
        .map(|p| grid.key(p).expect("inside enclosing box"))
        .collect();
    let mut member = ScoreMap::new(&grid);
    for &k in &keys {
        member.insert(k, 1);
    }
    let own = vec![1; keys.len()];
    first_violation(set.points(), &keys, &own, &grid, |k| member.get(k), exchange)
}

/// M♮-convexity: for all `x, y` in the set and `i` with `x_i > y_i`, some
/// `j` (or no `j`) with `x_j < y_j` keeps `x - e_i + e_j` and `y + e_i - e_j`
/// in the set. The empty set passes.
pub fn is_mnat_convex(set: &PointSet) -> Convexity {
    check_set(set, Exchange::Natural)
}

/// M-convexity: as [`is_mnat_convex`] without the null exchange.
pub fn is_m_convex(set: &PointSet) -> Convexity {
    check_set(set, Exchange::Strict)
}

fn check_function(table: &ObjectiveTable, exchange: Exchange) -> Convexity {
    let grid = table.grid();
    let keys: Vec<u64> = table
        .points()
        .iter()
        .map(|p| grid.key(p.counts()).expect("feasible points lie in the box"))
        .collect();
    let points: Vec<Vec<u32>> = table.points().iter().map(|p| p.counts().to_vec()).collect();
    let ranks = table.ranks();
    let score = |k: u64| table.index_of_key(k).map_or(0, |i| ranks[i]);
    first_violation(&points, &keys, ranks, grid, score, exchange)
}

/// Pseudo M♮-concavity over the feasible set: for all feasible `x, y` and `i`
/// with `x_i > y_i`, some `j` (or no `j`) with `x_j < y_j` keeps both moved
/// points feasible with `min f` at least `min(f(x), f(y))`.
pub fn is_pseudo_mnat_concave(table: &ObjectiveTable) -> Convexity {
    check_function(table, Exchange::Natural)
}

/// Pseudo M-concavity: as [`is_pseudo_mnat_concave`] without the null exchange.
pub fn is_pseudo_m_concave(table: &ObjectiveTable) -> Convexity {
    check_function(table, Exchange::Strict)
}

/// `{xi feasible : f(xi) >= lambda}`, possibly empty, in lexicographic order.
pub fn upper_contour_set(table: &ObjectiveTable, lambda: Value) -> Vec<Distribution> {
    table
        .points()
        .iter()
        .zip(table.values())
        .filter(|(_, v)| **v >= lambda)
        .map(|(p, _)| p.clone())
        .collect()
}

/// Appends `num_students - n(x)` to every point.
pub fn lift_add_unassigned(set: &PointSet, num_students: u32) -> Result<PointSet> {
    let lifted = set
        .points()
        .iter()
        .map(|p| {
            let n: u32 = p.iter().sum();
            let rest = num_students.checked_sub(n).ok_or_else(|| {
                Error::Precondition(format!(
                    "point assigns {n} students but only {num_students} exist"
                ))
            })?;
            let mut q = p.clone();
            q.push(rest);
            Ok(q)
        })
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(set.dim() + 1, lifted)
}

/// One row of the upper-contour sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContourCheck {
    pub lambda: Value,
    pub size: usize,
    pub verdict: Convexity,
}

/// M♮-convexity of the upper contour set at every attained value, ascending.
pub fn contour_sweep(table: &ObjectiveTable) -> Vec<ContourCheck> {
    let dim = table.grid().dim();
    table
        .attained_values()
        .into_iter()
        .map(|lambda| {
            let members = upper_contour_set(table, lambda);
            let set = PointSet::from_distributions(dim, &members).expect("uniform shape");
            ContourCheck {
                lambda,
                size: set.len(),
                verdict: is_mnat_convex(&set),
            }
        })
        .collect()
}

/// Both sides of the contour-set characterization of pseudo M♮-concavity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContourEquivalence {
    pub pseudo_concave: Convexity,
    pub contours: Vec<ContourCheck>,
}

impl ContourEquivalence {
    pub fn all_contours_convex(&self) -> bool {
        self.contours.iter().all(|c| c.verdict.holds())
    }

    /// The two sides give the same verdict.
    pub fn agrees(&self) -> bool {
        self.pseudo_concave.holds() == self.all_contours_convex()
    }
}

pub fn contour_equivalence(table: &ObjectiveTable) -> ContourEquivalence {
    ContourEquivalence {
        pseudo_concave: is_pseudo_mnat_concave(table),
        contours: contour_sweep(table),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Budget, Economy};
    use crate::objectives::Objective;

    fn set(dim: usize, pts: &[&[u32]]) -> PointSet {
        PointSet::new(dim, pts.iter().map(|p| p.to_vec())).unwrap()
    }

    #[test]
    fn simplex_slice_is_m_convex() {
        let s = set(2, &[&[2, 0], &[1, 1], &[0, 2]]);
        assert!(is_m_convex(&s).holds());
        assert!(is_mnat_convex(&s).holds());
    }

    #[test]
    fn interval_is_mnat_but_not_m_convex() {
        let s = set(1, &[&[0], &[1], &[2]]);
        assert!(is_mnat_convex(&s).holds());
        let w = is_m_convex(&s).witness().cloned().unwrap();
        assert_eq!((w.xi, w.xi2, w.pivot), (vec![1], vec![0], 0));
    }

    #[test]
    fn diagonal_pair_is_not_mnat_convex() {
        let s = set(2, &[&[0, 0], &[1, 1]]);
        let w = is_mnat_convex(&s).witness().cloned().unwrap();
        assert_eq!(w.xi, vec![1, 1]);
        assert_eq!(w.xi2, vec![0, 0]);
    }

    #[test]
    fn empty_and_singleton_sets_pass() {
        assert!(is_mnat_convex(&set(3, &[])).holds());
        assert!(is_m_convex(&set(2, &[&[4, 1]])).holds());
    }

    #[test]
    fn lifting_interval_gives_m_convex_simplex() {
        let lifted = lift_add_unassigned(&set(1, &[&[0], &[1], &[2]]), 2).unwrap();
        assert_eq!(lifted.points(), &[vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert!(is_m_convex(&lifted).holds());
        assert!(lift_add_unassigned(&set(1, &[&[3]]), 2).is_err());
    }

    fn one_school_one_type(q: u32) -> Economy {
        Economy::builder().school("c", q).types(["t"]).build().unwrap()
    }

    #[test]
    fn discrete_objective_on_interval() {
        let e = one_school_one_type(2);
        let goal = PolicyGoal::new(
            &e,
            (0..=2).map(|v| Distribution::from_rows(&[[v]]).unwrap()),
        )
        .unwrap();
        let table =
            ObjectiveTable::build(&e, &Objective::DiscreteMetricToGoal(goal), &Budget::default())
                .unwrap();
        assert!(is_pseudo_mnat_concave(&table).holds());
        assert!(!is_pseudo_m_concave(&table).holds());
    }

    #[test]
    fn upper_contours_at_extremes() {
        let e = one_school_one_type(3);
        let goal = PolicyGoal::new(&e, [Distribution::from_rows(&[[1]]).unwrap()]).unwrap();
        let table =
            ObjectiveTable::build(&e, &Objective::ChebyshevToGoal(goal), &Budget::default())
                .unwrap();
        assert_eq!(upper_contour_set(&table, Value::NegInf).len(), 4);
        assert_eq!(upper_contour_set(&table, Value::int(1)).len(), 0);
        assert_eq!(upper_contour_set(&table, Value::int(0)).len(), 1);
        let eq = contour_equivalence(&table);
        assert!(eq.agrees());
        assert!(eq.pseudo_concave.holds());
    }
}
