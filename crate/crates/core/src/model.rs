//! Market primitives: economies, preferences, matchings and distributions.
//!
//! Identifiers are opaque strings on the way in; everything downstream works
//! with positions in the economy's ordered lists, so every operation is
//! deterministic. The outside option is represented as `None` wherever a
//! school is expected.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position of a school in [`Economy::schools`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct School(pub usize);

/// Position of a student type in [`Economy::types`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StudentType(pub usize);

/// Position of a student in [`Economy::students`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Student(pub usize);

/// Position of a district in [`Economy::districts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct District(pub usize);

/// A school, or `None` for the outside option of staying unmatched.
pub type Choice = Option<School>;

/// Enumeration limits guarding against combinatorial blow-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of feasible distributions to materialize.
    pub distributions: u64,
    /// Maximum size of the raw assignment space `(|C|+1)^|S|`.
    pub matchings: u64,
    /// Maximum number of mechanism runs in a strategy-proofness check.
    pub runs: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            distributions: 10_000_000,
            matchings: 10_000_000,
            runs: 1_000_000,
        }
    }
}

impl Budget {
    pub const ENV_DISTRIBUTIONS: &'static str = "DISTMATCH_MAX_DISTRIBUTIONS";
    pub const ENV_MATCHINGS: &'static str = "DISTMATCH_MAX_MATCHINGS";
    pub const ENV_RUNS: &'static str = "DISTMATCH_MAX_RUNS";

    /// Defaults, overridden by any of the `DISTMATCH_MAX_*` variables that
    /// parse as unsigned integers.
    pub fn from_env() -> Self {
        let read = |key: &str, default: u64| {
            std::env::var(key)
                .ok()
                .and_then(|v| v.trim().parse::<u64>().ok())
                .unwrap_or(default)
        };
        let d = Budget::default();
        Budget {
            distributions: read(Self::ENV_DISTRIBUTIONS, d.distributions),
            matchings: read(Self::ENV_MATCHINGS, d.matchings),
            runs: read(Self::ENV_RUNS, d.runs),
        }
    }

    pub(crate) fn check(what: &'static str, required: u128, limit: u64) -> Result<()> {
        if required > u128::from(limit) {
            Err(Error::BudgetExceeded {
                what,
                required,
                limit,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Districts {
    names: Vec<String>,
    of_school: Vec<District>,
}

/// The fixed market primitives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Economy {
    schools: Vec<String>,
    capacities: Vec<u32>,
    types: Vec<String>,
    students: Vec<String>,
    student_types: Vec<StudentType>,
    districts: Option<Districts>,
    initial: Matching,
}

impl Economy {
    pub fn builder() -> EconomyBuilder {
        EconomyBuilder::default()
    }

    pub fn schools(&self) -> &[String] {
        &self.schools
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn students(&self) -> &[String] {
        &self.students
    }

    pub fn num_schools(&self) -> usize {
        self.schools.len()
    }

    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    pub fn num_students(&self) -> usize {
        self.students.len()
    }

    /// Number of (school, type) cells in a distribution grid.
    pub fn num_cells(&self) -> usize {
        self.schools.len() * self.types.len()
    }

    pub fn capacity(&self, school: School) -> u32 {
        self.capacities[school.0]
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    pub fn type_of(&self, student: Student) -> StudentType {
        self.student_types[student.0]
    }

    pub fn initial_matching(&self) -> &Matching {
        &self.initial
    }

    pub fn has_districts(&self) -> bool {
        self.districts.is_some()
    }

    pub fn district_names(&self) -> &[String] {
        self.districts.as_ref().map(|d| d.names.as_slice()).unwrap_or(&[])
    }

    pub fn num_districts(&self) -> usize {
        self.district_names().len()
    }

    pub fn district_of(&self, school: School) -> Option<District> {
        self.districts.as_ref().map(|d| d.of_school[school.0])
    }

    pub fn school_index(&self, name: &str) -> Option<School> {
        self.schools.iter().position(|s| s == name).map(School)
    }

    pub fn type_index(&self, name: &str) -> Option<StudentType> {
        self.types.iter().position(|s| s == name).map(StudentType)
    }

    pub fn student_index(&self, name: &str) -> Option<Student> {
        self.students.iter().position(|s| s == name).map(Student)
    }

    pub fn district_index(&self, name: &str) -> Option<District> {
        self.district_names()
            .iter()
            .position(|s| s == name)
            .map(District)
    }

    pub fn school_name(&self, school: School) -> &str {
        &self.schools[school.0]
    }

    pub fn type_name(&self, t: StudentType) -> &str {
        &self.types[t.0]
    }

    pub fn student_name(&self, s: Student) -> &str {
        &self.students[s.0]
    }

    pub fn choice_name(&self, choice: Choice) -> &str {
        match choice {
            Some(c) => self.school_name(c),
            None => "@none",
        }
    }

    pub fn all_schools(&self) -> impl Iterator<Item = School> + '_ {
        (0..self.schools.len()).map(School)
    }

    pub fn all_students(&self) -> impl Iterator<Item = Student> + '_ {
        (0..self.students.len()).map(Student)
    }

    pub fn all_types(&self) -> impl Iterator<Item = StudentType> + '_ {
        (0..self.types.len()).map(StudentType)
    }

    /// Builds a matching over this economy, checking capacities.
    pub fn matching(&self, assignment: Vec<Choice>) -> Result<Matching> {
        Matching::validated(&self.capacities, self.students.len(), assignment)
    }

    /// Same as [`Economy::matching`] but takes school names (`"@none"` for
    /// the outside option), in student order.
    pub fn matching_by_name(&self, names: &[&str]) -> Result<Matching> {
        let assignment = names
            .iter()
            .map(|n| {
                if *n == "@none" {
                    Ok(None)
                } else {
                    self.school_index(n)
                        .map(Some)
                        .ok_or_else(|| Error::InvalidMatching(format!("unknown school {n}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        self.matching(assignment)
    }

    /// A grid of zeros shaped for this economy.
    pub fn zero_distribution(&self) -> Distribution {
        Distribution::zeros(self.num_schools(), self.num_types())
    }

    pub(crate) fn check_dims(&self, xi: &Distribution) -> Result<()> {
        if xi.schools != self.num_schools() || xi.types != self.num_types() {
            return Err(Error::DimensionMismatch {
                expected_schools: self.num_schools(),
                expected_types: self.num_types(),
                schools: xi.schools,
                types: xi.types,
            });
        }
        Ok(())
    }

    /// Number of feasible distributions, `prod_c C(q_c + |T|, |T|)`, saturating.
    pub fn feasible_count(&self) -> u128 {
        let t = self.num_types() as u128;
        self.capacities
            .iter()
            .fold(1u128, |acc, &q| acc.saturating_mul(binomial(u128::from(q) + t, t)))
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Incremental constructor for [`Economy`] using string identifiers.
#[derive(Debug, Default, Clone)]
pub struct EconomyBuilder {
    schools: Vec<(String, u32, Option<String>)>,
    types: Vec<String>,
    students: Vec<(String, String, Option<String>)>,
}

impl EconomyBuilder {
    pub fn school(mut self, id: impl Into<String>, capacity: u32) -> Self {
        self.schools.push((id.into(), capacity, None));
        self
    }

    pub fn school_in(
        mut self,
        id: impl Into<String>,
        capacity: u32,
        district: impl Into<String>,
    ) -> Self {
        self.schools.push((id.into(), capacity, Some(district.into())));
        self
    }

    pub fn student_type(mut self, id: impl Into<String>) -> Self {
        self.types.push(id.into());
        self
    }

    pub fn types<I, S>(mut self, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.types.extend(ids.into_iter().map(Into::into));
        self
    }

    /// Adds a student; `initial` is a school id or `None` for unmatched.
    pub fn student(
        mut self,
        id: impl Into<String>,
        student_type: impl Into<String>,
        initial: Option<&str>,
    ) -> Self {
        self.students
            .push((id.into(), student_type.into(), initial.map(str::to_owned)));
        self
    }

    pub fn build(self) -> Result<Economy> {
        let bad = |m: String| Error::InvalidEconomy(m);
        check_unique("school", self.schools.iter().map(|s| s.0.as_str()))?;
        check_unique("type", self.types.iter().map(String::as_str))?;
        check_unique("student", self.students.iter().map(|s| s.0.as_str()))?;
        for id in self
            .schools
            .iter()
            .map(|s| &s.0)
            .chain(&self.types)
            .chain(self.students.iter().map(|s| &s.0))
        {
            if id == "@none" {
                return Err(bad("\"@none\" is reserved for the outside option".into()));
            }
        }

        let with_district = self.schools.iter().filter(|s| s.2.is_some()).count();
        let districts = if with_district == 0 {
            None
        } else if with_district != self.schools.len() {
            return Err(bad(
                "districts must be given for every school or for none".into(),
            ));
        } else {
            let mut names: Vec<String> = Vec::new();
            let mut of_school = Vec::with_capacity(self.schools.len());
            for (_, _, d) in &self.schools {
                let d = d.as_ref().expect("checked above");
                let idx = match names.iter().position(|n| n == d) {
                    Some(i) => i,
                    None => {
                        names.push(d.clone());
                        names.len() - 1
                    }
                };
                of_school.push(District(idx));
            }
            Some(Districts { names, of_school })
        };

        let schools: Vec<String> = self.schools.iter().map(|s| s.0.clone()).collect();
        let capacities: Vec<u32> = self.schools.iter().map(|s| s.1).collect();
        let school_pos: HashMap<&str, usize> = schools
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();

        let mut student_types = Vec::with_capacity(self.students.len());
        let mut assignment = Vec::with_capacity(self.students.len());
        for (id, ty, init) in &self.students {
            let t = self
                .types
                .iter()
                .position(|x| x == ty)
                .ok_or_else(|| bad(format!("student {id} has unknown type {ty}")))?;
            student_types.push(StudentType(t));
            let c = match init {
                None => None,
                Some(name) => Some(School(*school_pos.get(name.as_str()).ok_or_else(|| {
                    bad(format!("student {id} is initially at unknown school {name}"))
                })?)),
            };
            assignment.push(c);
        }
        let initial = Matching::validated(&capacities, self.students.len(), assignment)?;

        Ok(Economy {
            schools,
            capacities,
            types: self.types,
            students: self.students.into_iter().map(|s| s.0).collect(),
            student_types,
            districts,
            initial,
        })
    }
}

fn check_unique<'a>(what: &str, ids: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(Error::InvalidEconomy(format!("duplicate {what} id {id}")));
        }
    }
    Ok(())
}

/// A total assignment of students to schools or the outside option that
/// respects every capacity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    assignment: Vec<Choice>,
}

impl Matching {
    fn validated(capacities: &[u32], students: usize, assignment: Vec<Choice>) -> Result<Self> {
        if assignment.len() != students {
            return Err(Error::InvalidMatching(format!(
                "expected {students} assignments, got {}",
                assignment.len()
            )));
        }
        let mut load = vec![0u32; capacities.len()];
        for c in assignment.iter().flatten() {
            let slot = load.get_mut(c.0).ok_or_else(|| {
                Error::InvalidMatching(format!("school index {} out of range", c.0))
            })?;
            *slot += 1;
        }
        for (c, (&l, &q)) in load.iter().zip(capacities).enumerate() {
            if l > q {
                return Err(Error::InvalidMatching(format!(
                    "school #{c} receives {l} students but has capacity {q}"
                )));
            }
        }
        Ok(Matching { assignment })
    }

    /// Skips validation; callers guarantee the capacity invariant.
    pub(crate) fn from_trusted(assignment: Vec<Choice>) -> Self {
        Matching { assignment }
    }

    pub fn get(&self, student: Student) -> Choice {
        self.assignment[student.0]
    }

    pub fn assignment(&self) -> &[Choice] {
        &self.assignment
    }

    pub fn students_at(&self, school: School) -> impl Iterator<Item = Student> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |(_, c)| **c == Some(school))
            .map(|(s, _)| Student(s))
    }

    /// Renders `{(s1,c2),(s2,@none),...}` using the economy's identifiers.
    pub fn display<'a>(&'a self, economy: &'a Economy) -> impl fmt::Display + 'a {
        DisplayMatching {
            matching: self,
            economy,
        }
    }
}

struct DisplayMatching<'a> {
    matching: &'a Matching,
    economy: &'a Economy,
}

impl fmt::Display for DisplayMatching<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self
            .matching
            .assignment
            .iter()
            .enumerate()
            .map(|(s, c)| {
                format!(
                    "({},{})",
                    self.economy.student_name(Student(s)),
                    self.economy.choice_name(*c)
                )
            })
            .join(",");
        write!(f, "{{{body}}}")
    }
}

/// A strict ranking over all schools and the outside option.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Preference {
    ranking: Vec<Choice>,
    // position of each choice in `ranking`; slot 0 is the outside option,
    // slot c+1 is school c
    position: Vec<usize>,
}

impl Preference {
    /// Validates that `ranking` is a permutation of the schools plus `None`.
    pub fn new(economy: &Economy, ranking: Vec<Choice>) -> Result<Self> {
        Self::with_schools(economy.num_schools(), ranking).map_err(|reason| {
            Error::InvalidPreference {
                student: String::from("?"),
                reason,
            }
        })
    }

    fn with_schools(schools: usize, ranking: Vec<Choice>) -> std::result::Result<Self, String> {
        let mut position = vec![usize::MAX; schools + 1];
        for (i, choice) in ranking.iter().enumerate() {
            let slot = match choice {
                None => 0,
                Some(c) if c.0 < schools => c.0 + 1,
                Some(c) => return Err(format!("school index {} out of range", c.0)),
            };
            if position[slot] != usize::MAX {
                return Err("ranking lists an option twice".into());
            }
            position[slot] = i;
        }
        if ranking.len() != schools + 1 {
            return Err(format!(
                "ranking has {} entries but {} options exist",
                ranking.len(),
                schools + 1
            ));
        }
        Ok(Preference { ranking, position })
    }

    /// Ranking by identifiers, `"@none"` for the outside option.
    pub fn from_names(economy: &Economy, names: &[&str]) -> Result<Self> {
        let ranking = names
            .iter()
            .map(|n| {
                if *n == "@none" {
                    Ok(None)
                } else {
                    economy.school_index(n).map(Some).ok_or_else(|| {
                        Error::InvalidPreference {
                            student: String::from("?"),
                            reason: format!("unknown school {n}"),
                        }
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(economy, ranking)
    }

    /// Puts `head` first, in order, and completes the ranking with the
    /// remaining schools in economy order followed by the outside option
    /// (unless `head` already placed it).
    pub fn completed(economy: &Economy, head: &[Choice]) -> Result<Self> {
        let mut ranking: Vec<Choice> = head.to_vec();
        for c in economy.all_schools() {
            if !ranking.contains(&Some(c)) {
                ranking.push(Some(c));
            }
        }
        if !ranking.contains(&None) {
            ranking.push(None);
        }
        Self::new(economy, ranking)
    }

    pub fn ranking(&self) -> &[Choice] {
        &self.ranking
    }

    /// Zero-based rank of a choice; smaller is better.
    pub fn rank(&self, choice: Choice) -> usize {
        match choice {
            None => self.position[0],
            Some(c) => self.position[c.0 + 1],
        }
    }

    /// Strict preference `a P b`.
    pub fn prefers(&self, a: Choice, b: Choice) -> bool {
        self.rank(a) < self.rank(b)
    }

    /// Weak preference `a R b`.
    pub fn weakly_prefers(&self, a: Choice, b: Choice) -> bool {
        self.rank(a) <= self.rank(b)
    }
}

/// One preference per student, aligned with [`Economy::students`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    prefs: Vec<Preference>,
}

impl Profile {
    pub fn new(economy: &Economy, prefs: Vec<Preference>) -> Result<Self> {
        if prefs.len() != economy.num_students() {
            return Err(Error::InvalidPreference {
                student: String::from("*"),
                reason: format!(
                    "{} preferences for {} students",
                    prefs.len(),
                    economy.num_students()
                ),
            });
        }
        for (s, p) in prefs.iter().enumerate() {
            if p.position.len() != economy.num_schools() + 1 {
                return Err(Error::InvalidPreference {
                    student: economy.student_name(Student(s)).to_owned(),
                    reason: "ranking built for a different economy".into(),
                });
            }
        }
        Ok(Profile { prefs })
    }

    pub fn get(&self, student: Student) -> &Preference {
        &self.prefs[student.0]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Preference> {
        self.prefs.iter()
    }

    /// The profile `(P'_s, P_{-s})`.
    pub fn with_replaced(&self, student: Student, pref: Preference) -> Profile {
        let mut prefs = self.prefs.clone();
        prefs[student.0] = pref;
        Profile { prefs }
    }
}

/// Nonnegative integer grid indexed by (school, type).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<u32>>", try_from = "Vec<Vec<u32>>")]
pub struct Distribution {
    schools: usize,
    types: usize,
    counts: Vec<u32>,
}

impl Distribution {
    pub fn zeros(schools: usize, types: usize) -> Self {
        Distribution {
            schools,
            types,
            counts: vec![0; schools * types],
        }
    }

    /// Row-per-school constructor. Rows must all have the same length.
    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        let types = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if rows.iter().any(|r| r.as_ref().len() != types) {
            return Err(Error::InvalidObjective(
                "distribution rows have different lengths".into(),
            ));
        }
        Ok(Distribution {
            schools: rows.len(),
            types,
            counts: rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect(),
        })
    }

    pub(crate) fn from_flat(schools: usize, types: usize, counts: Vec<u32>) -> Self {
        debug_assert_eq!(counts.len(), schools * types);
        Distribution {
            schools,
            types,
            counts,
        }
    }

    pub fn num_schools(&self) -> usize {
        self.schools
    }

    pub fn num_types(&self) -> usize {
        self.types
    }

    pub fn get(&self, school: School, t: StudentType) -> u32 {
        self.counts[school.0 * self.types + t.0]
    }

    pub fn set(&mut self, school: School, t: StudentType, value: u32) {
        self.counts[school.0 * self.types + t.0] = value;
    }

    /// Flat row-major view, school-major.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        if self.types == 0 {
            return vec![Vec::new(); self.schools];
        }
        self.counts.chunks(self.types).map(<[u32]>::to_vec).collect()
    }

    /// `n(xi)`: total number of assigned students.
    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// `n_c(xi)`.
    pub fn school_total(&self, school: School) -> u32 {
        let start = school.0 * self.types;
        self.counts[start..start + self.types].iter().sum()
    }

    /// `n_d(xi)`; zero when the economy has no districts.
    pub fn district_total(&self, economy: &Economy, district: District) -> u32 {
        economy
            .all_schools()
            .filter(|&c| economy.district_of(c) == Some(district))
            .map(|c| self.school_total(c))
            .sum()
    }

    /// Sum of type-`t` students over the schools of `district`.
    pub fn district_type_total(&self, economy: &Economy, district: District, t: StudentType) -> u32 {
        economy
            .all_schools()
            .filter(|&c| economy.district_of(c) == Some(district))
            .map(|c| self.get(c, t))
            .sum()
    }

    /// `self - chi_remove + chi_add`, or `None` if a count would go negative.
    /// `None` cells stand for the zero vector `chi_{(0,0)}`.
    pub fn moved(
        &self,
        remove: Option<(School, StudentType)>,
        add: Option<(School, StudentType)>,
    ) -> Option<Distribution> {
        let mut out = self.clone();
        if let Some((c, t)) = remove {
            let i = c.0 * self.types + t.0;
            out.counts[i] = out.counts[i].checked_sub(1)?;
        }
        if let Some((c, t)) = add {
            out.counts[c.0 * self.types + t.0] += 1;
        }
        Some(out)
    }
}

impl From<Distribution> for Vec<Vec<u32>> {
    fn from(d: Distribution) -> Self {
        d.rows()
    }
}

impl TryFrom<Vec<Vec<u32>>> for Distribution {
    type Error = Error;

    fn try_from(rows: Vec<Vec<u32>>) -> Result<Self> {
        Distribution::from_rows(&rows)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().join(",")))
            .join(",");
        write!(f, "[{rows}]")
    }
}

/// `xi(mu)`: counts of each type at each school.
pub fn induced_distribution(economy: &Economy, matching: &Matching) -> Distribution {
    let mut xi = economy.zero_distribution();
    for (s, choice) in matching.assignment().iter().enumerate() {
        if let Some(c) = choice {
            let t = economy.type_of(Student(s));
            let v = xi.get(*c, t);
            xi.set(*c, t, v + 1);
        }
    }
    xi
}

/// Capacity check `sum_t xi_c^t <= q_c` for every school.
pub fn is_feasible(economy: &Economy, xi: &Distribution) -> Result<bool> {
    economy.check_dims(xi)?;
    Ok(economy
        .all_schools()
        .all(|c| xi.school_total(c) <= economy.capacity(c)))
}

/// All feasible distributions in lexicographic order of the flat grid.
pub fn enumerate_feasible(economy: &Economy, budget: &Budget) -> Result<Vec<Distribution>> {
    Budget::check("feasible-distribution", economy.feasible_count(), budget.distributions)?;
    let types = economy.num_types();
    let per_school: Vec<Vec<Vec<u32>>> = economy
        .capacities()
        .iter()
        .map(|&q| bounded_compositions(types, q))
        .collect();
    if per_school.is_empty() {
        return Ok(vec![economy.zero_distribution()]);
    }
    Ok(per_school
        .iter()
        .map(|rows| rows.iter())
        .multi_cartesian_product()
        .map(|rows| {
            Distribution::from_flat(
                economy.num_schools(),
                types,
                rows.into_iter().flatten().copied().collect(),
            )
        })
        .collect())
}

/// Vectors of length `len` with entries summing to at most `cap`, lexicographic.
fn bounded_compositions(len: usize, cap: u32) -> Vec<Vec<u32>> {
    fn go(len: usize, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=cap {
            prefix.push(v);
            go(len, cap - v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(len, cap, &mut Vec::with_capacity(len), &mut out);
    out
}

/// Every student weakly prefers `mu` to `nu` and at least one strictly.
pub fn pareto_dominates(prefs: &Profile, mu: &Matching, nu: &Matching) -> bool {
    let mut strict = false;
    for (p, (&a, &b)) in prefs
        .iter()
        .zip(mu.assignment().iter().zip(nu.assignment()))
    {
        if p.prefers(b, a) {
            return false;
        }
        strict |= p.prefers(a, b);
    }
    strict
}

/// Every student weakly prefers her outcome in `mu` to her initial outcome.
pub fn is_individually_rational(economy: &Economy, prefs: &Profile, mu: &Matching) -> bool {
    economy
        .all_students()
        .all(|s| prefs.get(s).weakly_prefers(mu.get(s), economy.initial_matching().get(s)))
}
