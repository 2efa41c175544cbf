//! Distributional objectives, distance metrics and the policy-goal builders.
//!
//! Goals are always materialized as explicit sets of feasible distributions,
//! so every distance minimization and convexity check downstream is exact.
//! Objective values are exact rationals with a separate `-inf` sentinel for
//! distributions outside the feasible set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::lattice::{Grid, ScoreMap};
use crate::model::{
    enumerate_feasible, induced_distribution, is_feasible, Budget, District, Distribution,
    Economy, Matching, School, StudentType,
};

/// An extended-real objective value. `NegInf` orders below every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    NegInf,
    Finite(Rational64),
}

impl Value {
    pub fn int(v: i64) -> Self {
        Value::Finite(Rational64::from_integer(v))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Value::Finite(_))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::NegInf => f.write_str("-inf"),
            Value::Finite(r) if r.is_integer() => write!(f, "{}", r.to_integer()),
            Value::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// A non-empty, deduplicated set of feasible distributions, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolicyGoal {
    members: Vec<Distribution>,
}

impl PolicyGoal {
    /// Checks shape, feasibility and non-emptiness; sorts and deduplicates.
    pub fn new(economy: &Economy, members: impl IntoIterator<Item = Distribution>) -> Result<Self> {
        let set: BTreeSet<Distribution> = members.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyGoal);
        }
        for xi in &set {
            if !is_feasible(economy, xi)? {
                return Err(Error::InvalidGoal(format!("goal member {xi} is not feasible")));
            }
        }
        Ok(PolicyGoal {
            members: set.into_iter().collect(),
        })
    }

    pub fn members(&self) -> &[Distribution] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, xi: &Distribution) -> bool {
        self.members.binary_search(xi).is_ok()
    }
}

/// Which metric turns a goal into an objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Chebyshev,
    Discrete,
    Manhattan,
}

/// A distributional objective on the feasible set of some economy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    /// Explicit values, total on the feasible set.
    Tabulated(BTreeMap<Distribution, Rational64>),
    /// `-min_{g in goal} D_C(xi, g)`.
    ChebyshevToGoal(PolicyGoal),
    /// `1` on the goal, `0` elsewhere.
    DiscreteMetricToGoal(PolicyGoal),
    /// `-min_{g in goal} D_M(xi, g)`.
    ManhattanToGoal(PolicyGoal),
}

impl Objective {
    /// Validates that `values` covers every feasible distribution and nothing else.
    pub fn tabulated(
        economy: &Economy,
        values: BTreeMap<Distribution, Rational64>,
        budget: &Budget,
    ) -> Result<Self> {
        for xi in values.keys() {
            if !is_feasible(economy, xi)? {
                return Err(Error::InvalidObjective(format!(
                    "tabulated entry {xi} is not a feasible distribution"
                )));
            }
        }
        for xi in enumerate_feasible(economy, budget)? {
            if !values.contains_key(&xi) {
                return Err(Error::InvalidObjective(format!(
                    "tabulated objective has no value for {xi}"
                )));
            }
        }
        Ok(Objective::Tabulated(values))
    }

    pub fn from_goal(metric: Metric, goal: PolicyGoal) -> Self {
        match metric {
            Metric::Chebyshev => Objective::ChebyshevToGoal(goal),
            Metric::Discrete => Objective::DiscreteMetricToGoal(goal),
            Metric::Manhattan => Objective::ManhattanToGoal(goal),
        }
    }

    /// The goal behind a metric objective, if any.
    pub fn goal(&self) -> Option<&PolicyGoal> {
        match self {
            Objective::Tabulated(_) => None,
            Objective::ChebyshevToGoal(g)
            | Objective::DiscreteMetricToGoal(g)
            | Objective::ManhattanToGoal(g) => Some(g),
        }
    }

    /// `f(xi)`, with `-inf` for any distribution outside the feasible set.
    pub fn evaluate(&self, economy: &Economy, xi: &Distribution) -> Value {
        match is_feasible(economy, xi) {
            Ok(true) => {}
            _ => return Value::NegInf,
        }
        match self {
            Objective::Tabulated(map) => map.get(xi).map_or(Value::NegInf, |v| Value::Finite(*v)),
            Objective::ChebyshevToGoal(g) => Value::int(-i64::from(min_distance(g, xi, chebyshev))),
            Objective::ManhattanToGoal(g) => Value::int(-i64::from(min_distance(g, xi, manhattan))),
            Objective::DiscreteMetricToGoal(g) => Value::int(i64::from(g.contains(xi))),
        }
    }

    pub fn bind<'a>(&'a self, economy: &'a Economy) -> BoundObjective<'a> {
        BoundObjective {
            economy,
            objective: self,
        }
    }
}

fn min_distance(goal: &PolicyGoal, xi: &Distribution, d: fn(&[u32], &[u32]) -> u32) -> u32 {
    goal.members()
        .iter()
        .map(|g| d(xi.counts(), g.counts()))
        .min()
        .expect("goals are non-empty")
}

fn chebyshev(a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).max().unwrap_or(0)
}

fn manhattan(a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum()
}

fn same_shape(a: &Distribution, b: &Distribution) -> Result<()> {
    if a.num_schools() != b.num_schools() || a.num_types() != b.num_types() {
        return Err(Error::DimensionMismatch {
            expected_schools: a.num_schools(),
            expected_types: a.num_types(),
            schools: b.num_schools(),
            types: b.num_types(),
        });
    }
    Ok(())
}

/// `D_C`: largest absolute cellwise difference.
pub fn chebyshev_distance(a: &Distribution, b: &Distribution) -> Result<u32> {
    same_shape(a, b)?;
    Ok(chebyshev(a.counts(), b.counts()))
}

/// `D_M`: sum of absolute cellwise differences.
pub fn manhattan_distance(a: &Distribution, b: &Distribution) -> Result<u32> {
    same_shape(a, b)?;
    Ok(manhattan(a.counts(), b.counts()))
}

/// Anything that scores distributions. Implemented by objectives bound to an
/// economy and by precomputed [`ObjectiveTable`]s.
pub trait Evaluator: Sync {
    fn value(&self, xi: &Distribution) -> Value;
}

#[derive(Debug, Clone, Copy)]
pub struct BoundObjective<'a> {
    economy: &'a Economy,
    objective: &'a Objective,
}

impl Evaluator for BoundObjective<'_> {
    fn value(&self, xi: &Distribution) -> Value {
        self.objective.evaluate(self.economy, xi)
    }
}

/// An objective evaluated once over the whole feasible set.
#[derive(Debug, Clone)]
pub struct ObjectiveTable {
    grid: Grid,
    points: Vec<Distribution>,
    values: Vec<Value>,
    // key -> index into `points` + 1; zero marks infeasible cells
    index: ScoreMap,
    ranks: Vec<u32>,
}

impl ObjectiveTable {
    pub fn build(economy: &Economy, objective: &Objective, budget: &Budget) -> Result<Self> {
        let bound = objective.bind(economy);
        Self::from_evaluator(economy, &bound, budget)
    }

    pub fn from_evaluator(economy: &Economy, f: &dyn Evaluator, budget: &Budget) -> Result<Self> {
        let points = enumerate_feasible(economy, budget)?;
        let values: Vec<Value> = points.iter().map(|xi| f.value(xi)).collect();
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidObjective(format!(
                "objective is -inf at feasible distribution {}",
                points[i]
            )));
        }
        let grid = economy_grid(economy)?;
        let mut index = ScoreMap::new(&grid);
        for (i, xi) in points.iter().enumerate() {
            index.insert(grid.key(xi.counts()).expect("feasible points lie in the box"), i as u32 + 1);
        }
        let distinct: Vec<Value> = values
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let ranks = values
            .iter()
            .map(|v| distinct.binary_search(v).expect("present") as u32 + 1)
            .collect();
        Ok(ObjectiveTable {
            grid,
            points,
            values,
            index,
            ranks,
        })
    }

    /// The feasible set, in lexicographic order.
    pub fn points(&self) -> &[Distribution] {
        &self.points
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Distinct finite values attained, ascending.
    pub fn attained_values(&self) -> Vec<Value> {
        self.values
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Ordinal rank of each point's value: 1 for the smallest attained value.
    pub(crate) fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub(crate) fn index_of_key(&self, key: u64) -> Option<usize> {
        match self.index.get(key) {
            0 => None,
            i => Some(i as usize - 1),
        }
    }
}

impl Evaluator for ObjectiveTable {
    fn value(&self, xi: &Distribution) -> Value {
        self.grid
            .key(xi.counts())
            .and_then(|k| self.index_of_key(k))
            .map_or(Value::NegInf, |i| self.values[i])
    }
}

/// Box with bound `q_c` on each (c, t) cell; contains the feasible set.
pub(crate) fn economy_grid(economy: &Economy) -> Result<Grid> {
    let bounds = economy
        .all_schools()
        .flat_map(|c| std::iter::repeat_n(economy.capacity(c), economy.num_types()))
        .collect();
    Grid::new(bounds)
}

/// `f(xi(mu)) >= f(xi(mu_0))`.
pub fn weakly_improves(f: &dyn Evaluator, economy: &Economy, mu: &Matching) -> bool {
    f.value(&induced_distribution(economy, mu))
        >= f.value(&induced_distribution(economy, economy.initial_matching()))
}

/// School-level floors and ceilings on total enrolment (`l_c`, `u_c`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotaBounds {
    pub floors: Vec<u32>,
    pub ceilings: Vec<u32>,
}

impl QuotaBounds {
    /// `l_c = 0`, `u_c = q_c`.
    pub fn trivial(economy: &Economy) -> Self {
        QuotaBounds {
            floors: vec![0; economy.num_schools()],
            ceilings: economy.capacities().to_vec(),
        }
    }

    pub fn admits(&self, xi: &Distribution) -> bool {
        (0..self.floors.len()).all(|c| {
            let n = xi.school_total(School(c));
            self.floors[c] <= n && n <= self.ceilings[c]
        })
    }

    fn validate(&self, economy: &Economy) -> Result<()> {
        if self.floors.len() != economy.num_schools() || self.ceilings.len() != economy.num_schools() {
            return Err(Error::InvalidGoal(
                "quota bounds need one floor and one ceiling per school".into(),
            ));
        }
        for c in economy.all_schools() {
            if self.ceilings[c.0] < self.floors[c.0] {
                return Err(Error::InvalidGoal(format!(
                    "school {}: ceiling {} below floor {}",
                    economy.school_name(c),
                    self.ceilings[c.0],
                    self.floors[c.0]
                )));
            }
        }
        Ok(())
    }
}

/// Type-specific floors and ceilings per school (`p_c^t`, `q_c^t`), indexed
/// `[school][type]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeBounds {
    pub floors: Vec<Vec<u32>>,
    pub ceilings: Vec<Vec<u32>>,
}

impl TypeBounds {
    /// All floors zero, every ceiling equal to the school's capacity.
    pub fn trivial(economy: &Economy) -> Self {
        TypeBounds {
            floors: vec![vec![0; economy.num_types()]; economy.num_schools()],
            ceilings: economy
                .capacities()
                .iter()
                .map(|&q| vec![q; economy.num_types()])
                .collect(),
        }
    }

    pub fn admits(&self, xi: &Distribution) -> bool {
        self.floors.iter().enumerate().all(|(c, row)| {
            row.iter().enumerate().all(|(t, &p)| {
                let v = xi.get(School(c), StudentType(t));
                p <= v && v <= self.ceilings[c][t]
            })
        })
    }

    fn validate(&self, economy: &Economy) -> Result<()> {
        let shaped = |m: &Vec<Vec<u32>>| {
            m.len() == economy.num_schools() && m.iter().all(|r| r.len() == economy.num_types())
        };
        if !shaped(&self.floors) || !shaped(&self.ceilings) {
            return Err(Error::InvalidGoal(
                "diversity bounds need a floor and ceiling for every (school, type)".into(),
            ));
        }
        for c in economy.all_schools() {
            for t in economy.all_types() {
                let (p, q) = (self.floors[c.0][t.0], self.ceilings[c.0][t.0]);
                if q < p {
                    return Err(Error::InvalidGoal(format!(
                        "school {} type {}: ceiling {q} below floor {p}",
                        economy.school_name(c),
                        economy.type_name(t)
                    )));
                }
            }
            let floor_sum: u32 = self.floors[c.0].iter().sum();
            if floor_sum > economy.capacity(c) {
                return Err(Error::InvalidGoal(format!(
                    "school {}: floors sum to {floor_sum} but capacity is {}",
                    economy.school_name(c),
                    economy.capacity(c)
                )));
            }
        }
        Ok(())
    }
}

/// Per-district enrolment targets `k_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistrictTargets(pub Vec<u32>);

impl DistrictTargets {
    /// `k_d = n_d(xi(mu_0))`.
    pub fn initial(economy: &Economy) -> Self {
        let xi0 = induced_distribution(economy, economy.initial_matching());
        DistrictTargets(
            (0..economy.num_districts())
                .map(|d| xi0.district_total(economy, District(d)))
                .collect(),
        )
    }

    fn validate(&self, economy: &Economy) -> Result<()> {
        if !economy.has_districts() {
            return Err(Error::InvalidGoal("economy has no districts".into()));
        }
        if self.0.len() != economy.num_districts() {
            return Err(Error::InvalidGoal(format!(
                "{} district targets for {} districts",
                self.0.len(),
                economy.num_districts()
            )));
        }
        Ok(())
    }

    pub fn admits(&self, economy: &Economy, xi: &Distribution, mode: DistrictMode) -> bool {
        self.0.iter().enumerate().all(|(d, &k)| {
            let n = xi.district_total(economy, District(d));
            match mode {
                DistrictMode::ExchangeFeasibility => n >= k,
                DistrictMode::Balanced => n == k,
            }
        })
    }
}

/// How district totals are constrained relative to `k_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistrictMode {
    /// `n_d(xi) >= k_d`.
    ExchangeFeasibility,
    /// `n_d(xi) = k_d`.
    Balanced,
}

/// District-level type floors and ceilings (`p_d^t`, `q_d^t`), `[district][type]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistrictTypeBounds {
    pub floors: Vec<Vec<u32>>,
    pub ceilings: Vec<Vec<u32>>,
}

impl DistrictTypeBounds {
    /// Floors zero, ceilings `|S|`.
    pub fn trivial(economy: &Economy) -> Self {
        let n = economy.num_students() as u32;
        DistrictTypeBounds {
            floors: vec![vec![0; economy.num_types()]; economy.num_districts()],
            ceilings: vec![vec![n; economy.num_types()]; economy.num_districts()],
        }
    }

    pub fn admits(&self, economy: &Economy, xi: &Distribution) -> bool {
        self.floors.iter().enumerate().all(|(d, row)| {
            row.iter().enumerate().all(|(t, &p)| {
                let v = xi.district_type_total(economy, District(d), StudentType(t));
                p <= v && v <= self.ceilings[d][t]
            })
        })
    }

    fn validate(&self, economy: &Economy) -> Result<()> {
        if !economy.has_districts() {
            return Err(Error::InvalidGoal("economy has no districts".into()));
        }
        let shaped = |m: &Vec<Vec<u32>>| {
            m.len() == economy.num_districts() && m.iter().all(|r| r.len() == economy.num_types())
        };
        if !shaped(&self.floors) || !shaped(&self.ceilings) {
            return Err(Error::InvalidGoal(
                "district bounds need a floor and ceiling for every (district, type)".into(),
            ));
        }
        for (d, (fr, cr)) in self.floors.iter().zip(&self.ceilings).enumerate() {
            for (t, (p, q)) in fr.iter().zip(cr).enumerate() {
                if q < p {
                    return Err(Error::InvalidGoal(format!(
                        "district {} type {}: ceiling {q} below floor {p}",
                        economy.district_names()[d],
                        economy.type_name(StudentType(t))
                    )));
                }
            }
        }
        Ok(())
    }
}

fn filtered_goal(
    economy: &Economy,
    budget: &Budget,
    keep: impl Fn(&Distribution) -> bool,
) -> Result<PolicyGoal> {
    let members: Vec<Distribution> = enumerate_feasible(economy, budget)?
        .into_iter()
        .filter(|xi| keep(xi))
        .collect();
    if members.is_empty() {
        return Err(Error::EmptyGoal);
    }
    Ok(PolicyGoal { members })
}

/// School-level quota policy: `l_c <= n_c(xi) <= u_c`.
pub fn build_quota_goal(economy: &Economy, bounds: &QuotaBounds, budget: &Budget) -> Result<PolicyGoal> {
    bounds.validate(economy)?;
    filtered_goal(economy, budget, |xi| bounds.admits(xi))
}

/// School-level diversity policy: `p_c^t <= xi_c^t <= q_c^t`.
pub fn build_diversity_goal(economy: &Economy, bounds: &TypeBounds, budget: &Budget) -> Result<PolicyGoal> {
    bounds.validate(economy)?;
    filtered_goal(economy, budget, |xi| bounds.admits(xi))
}

/// Exchange-feasibility policy: `n_d(xi) >= k_d`. `None` uses `n_d(xi(mu_0))`.
pub fn build_exchange_feasibility_goal(
    economy: &Economy,
    targets: Option<&DistrictTargets>,
    budget: &Budget,
) -> Result<PolicyGoal> {
    district_goal(economy, targets, DistrictMode::ExchangeFeasibility, budget)
}

/// Balanced-exchange policy: `n_d(xi) = k_d`. `None` uses `n_d(xi(mu_0))`.
pub fn build_balanced_exchange_goal(
    economy: &Economy,
    targets: Option<&DistrictTargets>,
    budget: &Budget,
) -> Result<PolicyGoal> {
    district_goal(economy, targets, DistrictMode::Balanced, budget)
}

fn district_goal(
    economy: &Economy,
    targets: Option<&DistrictTargets>,
    mode: DistrictMode,
    budget: &Budget,
) -> Result<PolicyGoal> {
    if !economy.has_districts() {
        return Err(Error::InvalidGoal("economy has no districts".into()));
    }
    let targets = targets
        .cloned()
        .unwrap_or_else(|| DistrictTargets::initial(economy));
    targets.validate(economy)?;
    filtered_goal(economy, budget, |xi| targets.admits(economy, xi, mode))
}

/// School-level diversity intersected with a district policy.
pub fn build_combined_goal(
    economy: &Economy,
    bounds: &TypeBounds,
    targets: Option<&DistrictTargets>,
    mode: DistrictMode,
    budget: &Budget,
) -> Result<PolicyGoal> {
    bounds.validate(economy)?;
    if !economy.has_districts() {
        return Err(Error::InvalidGoal("economy has no districts".into()));
    }
    let targets = targets
        .cloned()
        .unwrap_or_else(|| DistrictTargets::initial(economy));
    targets.validate(economy)?;
    filtered_goal(economy, budget, |xi| {
        bounds.admits(xi) && targets.admits(economy, xi, mode)
    })
}

/// District-level diversity: `p_d^t <= sum_{c in d} xi_c^t <= q_d^t`.
pub fn build_district_diversity_goal(
    economy: &Economy,
    bounds: &DistrictTypeBounds,
    budget: &Budget,
) -> Result<PolicyGoal> {
    bounds.validate(economy)?;
    filtered_goal(economy, budget, |xi| bounds.admits(economy, xi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_school(capacity: u32, types: usize) -> Economy {
        let names: Vec<String> = (1..=types).map(|i| format!("t{i}")).collect();
        Economy::builder()
            .school("c", capacity)
            .types(names)
            .build()
            .unwrap()
    }

    fn d(v: &[u32]) -> Distribution {
        Distribution::from_rows(&[v]).unwrap()
    }

    #[test]
    fn distances() {
        assert_eq!(chebyshev_distance(&d(&[3, 1]), &d(&[3, 1])).unwrap(), 0);
        assert_eq!(chebyshev_distance(&d(&[3, 1]), &d(&[1, 1])).unwrap(), 2);
        assert_eq!(chebyshev_distance(&d(&[2, 1]), &d(&[0, 2])).unwrap(), 2);
        assert_eq!(manhattan_distance(&d(&[2, 1]), &d(&[2, 1])).unwrap(), 0);
        assert_eq!(manhattan_distance(&d(&[2, 1]), &d(&[1, 1])).unwrap(), 1);
        assert!(chebyshev_distance(&d(&[1]), &d(&[1, 1])).is_err());
    }

    #[test]
    fn manhattan_objective_values() {
        let e = one_school(4, 2);
        let goal = PolicyGoal::new(&e, [d(&[1, 1]), d(&[2, 1])]).unwrap();
        let f = Objective::ManhattanToGoal(goal);
        assert_eq!(f.evaluate(&e, &d(&[3, 1])), Value::int(-1));
        assert_eq!(f.evaluate(&e, &d(&[2, 0])), Value::int(-1));
        assert_eq!(f.evaluate(&e, &d(&[2, 1])), Value::int(0));
        assert_eq!(f.evaluate(&e, &d(&[3, 0])), Value::int(-2));
        // outside the capacity
        assert_eq!(f.evaluate(&e, &d(&[4, 1])), Value::NegInf);
    }

    #[test]
    fn discrete_and_chebyshev_vanish_exactly_on_goal() {
        let e = one_school(3, 2);
        let goal = PolicyGoal::new(&e, [d(&[1, 1]), d(&[0, 2])]).unwrap();
        let fd = Objective::DiscreteMetricToGoal(goal.clone());
        let fc = Objective::ChebyshevToGoal(goal.clone());
        for xi in enumerate_feasible(&e, &Budget::default()).unwrap() {
            let member = goal.contains(&xi);
            assert_eq!(fd.evaluate(&e, &xi), Value::int(i64::from(member)));
            let vc = fc.evaluate(&e, &xi);
            assert!(vc <= Value::int(0));
            assert_eq!(vc == Value::int(0), member);
        }
    }

    #[test]
    fn quota_goal_examples() {
        let e = one_school(3, 1);
        let g = build_quota_goal(
            &e,
            &QuotaBounds {
                floors: vec![1],
                ceilings: vec![2],
            },
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(g.members(), &[d(&[1]), d(&[2])]);

        let all = build_quota_goal(&e, &QuotaBounds::trivial(&e), &Budget::default()).unwrap();
        assert_eq!(all.len(), 4);

        let inverted = QuotaBounds {
            floors: vec![2],
            ceilings: vec![1],
        };
        assert!(matches!(
            build_quota_goal(&e, &inverted, &Budget::default()),
            Err(Error::InvalidGoal(_))
        ));
        let unreachable = QuotaBounds {
            floors: vec![3],
            ceilings: vec![3],
        };
        let e1 = one_school(2, 1);
        assert!(matches!(
            build_quota_goal(&e1, &unreachable, &Budget::default()),
            Err(Error::EmptyGoal)
        ));
    }

    #[test]
    fn diversity_floors_must_fit_capacity() {
        let e = one_school(2, 2);
        let bounds = TypeBounds {
            floors: vec![vec![2, 1]],
            ceilings: vec![vec![2, 2]],
        };
        let err = build_diversity_goal(&e, &bounds, &Budget::default()).unwrap_err();
        assert!(err.to_string().contains("school c"));
    }

    #[test]
    fn district_builders_need_districts() {
        let e = one_school(2, 1);
        assert!(build_exchange_feasibility_goal(&e, None, &Budget::default()).is_err());
        assert!(build_balanced_exchange_goal(&e, None, &Budget::default()).is_err());
    }

    #[test]
    fn value_order_puts_neg_inf_first() {
        assert!(Value::NegInf < Value::int(-1000));
        assert!(Value::int(0) < Value::Finite(Rational64::new(1, 2)));
        assert_eq!(Value::Finite(Rational64::new(3, 4)).to_string(), "3/4");
    }

    #[test]
    fn table_matches_direct_evaluation() {
        let e = Economy::builder()
            .school("a", 2)
            .school("b", 1)
            .types(["x", "y"])
            .build()
            .unwrap();
        let goal = PolicyGoal::new(&e, [Distribution::from_rows(&[[1, 1], [0, 0]]).unwrap()]).unwrap();
        let f = Objective::ChebyshevToGoal(goal);
        let table = ObjectiveTable::build(&e, &f, &Budget::default()).unwrap();
        for xi in table.points() {
            assert_eq!(table.value(xi), f.evaluate(&e, xi));
        }
        let outside = Distribution::from_rows(&[[2, 1], [0, 0]]).unwrap();
        assert_eq!(table.value(&outside), Value::NegInf);
    }
}
