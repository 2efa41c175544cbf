//! JSON instance documents.
//!
//! A document names everything by identifier; [`load_instance`] resolves the
//! identifiers, validates the market and materializes the objective. Every
//! rejection carries a stable diagnostic code:
//!
//! | code | meaning |
//! |------|---------|
//! | E100 | malformed JSON (with line and column) |
//! | E101 | well-formed JSON that does not match the schema |
//! | E102 | malformed number (negative, fractional or out of range) |
//! | E110 | unknown school |
//! | E111 | unknown student |
//! | E112 | unknown type |
//! | E113 | unknown or inconsistent district |
//! | E120 | ranking misses an option |
//! | E121 | ranking lists an option twice |
//! | E122 | duplicate identifier or missing preference |
//! | E130 | initial matching exceeds a capacity |
//! | E140 | invalid objective or goal parameters |
//! | E150 | invalid master list |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{Budget, Distribution, Economy, Preference, Profile};
use crate::objectives::{
    build_balanced_exchange_goal, build_combined_goal, build_district_diversity_goal,
    build_diversity_goal, build_exchange_feasibility_goal, build_quota_goal, DistrictMode,
    DistrictTargets, DistrictTypeBounds, Metric, Objective, PolicyGoal, QuotaBounds, TypeBounds,
};
use crate::ttc::{MasterList, PriorityRule};

/// Identifier of the outside option in documents.
pub const NONE_TOKEN: &str = "@none";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub economy: EconomyDoc,
    /// Student id to a full ranking of school ids and `"@none"`.
    pub preferences: BTreeMap<String, Vec<String>>,
    pub objective: ObjectiveDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub master_list: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priority: Option<PriorityDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomyDoc {
    pub schools: Vec<SchoolDoc>,
    pub types: Vec<String>,
    pub students: Vec<StudentDoc>,
    /// Student id to school id; absent students start unassigned.
    #[serde(default)]
    pub initial_matching: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchoolDoc {
    pub id: String,
    pub capacity: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub district: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudentDoc {
    pub id: String,
    #[serde(rename = "type")]
    pub student_type: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorityDoc {
    Pair,
    School,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObjectiveDoc {
    Tabulated {
        entries: Vec<TabulatedEntry>,
        /// Value of every feasible distribution not listed.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        default: Option<NumberDoc>,
    },
    Chebyshev { goal: GoalDoc },
    Discrete { goal: GoalDoc },
    Manhattan { goal: GoalDoc },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabulatedEntry {
    pub distribution: Vec<Vec<u32>>,
    pub value: NumberDoc,
}

/// An integer, or a rational written `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberDoc {
    Int(i64),
    Text(String),
}

type Bounds1 = BTreeMap<String, u32>;
type Bounds2 = BTreeMap<String, BTreeMap<String, u32>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builder", deny_unknown_fields)]
pub enum GoalDoc {
    /// School totals; missing floors are 0, missing ceilings the capacity.
    #[serde(rename = "quota")]
    Quota {
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        floors: Bounds1,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        ceilings: Bounds1,
    },
    /// Per (school, type); missing floors are 0, missing ceilings the capacity.
    #[serde(rename = "diversity")]
    Diversity {
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        floors: Bounds2,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        ceilings: Bounds2,
    },
    /// District totals at least `targets`; missing targets use the initial totals.
    #[serde(rename = "exchange")]
    Exchange {
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        targets: Bounds1,
    },
    /// District totals equal to `targets`; missing targets use the initial totals.
    #[serde(rename = "balanced")]
    Balanced {
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        targets: Bounds1,
    },
    #[serde(rename = "diversity+exchange")]
    DiversityExchange {
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        floors: Bounds2,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        ceilings: Bounds2,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        targets: Bounds1,
    },
    #[serde(rename = "diversity+balanced")]
    DiversityBalanced {
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        floors: Bounds2,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        ceilings: Bounds2,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        targets: Bounds1,
    },
    /// Per (district, type); missing floors are 0, missing ceilings `|S|`.
    #[serde(rename = "district-diversity")]
    DistrictDiversity {
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        floors: Bounds2,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        ceilings: Bounds2,
    },
    /// Member distributions listed row by row.
    #[serde(rename = "explicit")]
    Explicit { members: Vec<Vec<Vec<u32>>> },
}

/// A located rejection of an instance document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: &'static str,
    pub line: Option<usize>,
    pub column: Option<usize>,
    /// Dotted path of the offending field.
    pub field: Option<String>,
    pub message: String,
}

impl Diagnostic {
    fn at(code: &'static str, field: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            line: None,
            column: None,
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code)?;
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, " line {l} column {c}")?;
        }
        if let Some(field) = &self.field {
            write!(f, " at {field}")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadError {
    Invalid(Diagnostic),
    /// Materializing the objective exceeded an enumeration budget.
    Budget(Error),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Invalid(d) => d.fmt(f),
            LoadError::Budget(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for LoadError {}

impl From<Diagnostic> for LoadError {
    fn from(d: Diagnostic) -> Self {
        LoadError::Invalid(d)
    }
}

/// Parses JSON into a document without resolving identifiers.
pub fn parse_document(text: &str) -> Result<InstanceDocument, Diagnostic> {
    serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        let msg = e.to_string();
        let code = match e.classify() {
            Category::Syntax | Category::Eof | Category::Io => "E100",
            Category::Data if is_number_error(&msg) => "E102",
            Category::Data => "E101",
        };
        // serde_json appends " at line L column C"; the fields carry it instead
        let message = msg
            .rsplit_once(" at line ")
            .map_or(msg.as_str(), |(head, _)| head)
            .to_owned();
        Diagnostic {
            code,
            line: Some(e.line()),
            column: Some(e.column()),
            field: None,
            message,
        }
    })
}

fn is_number_error(msg: &str) -> bool {
    msg.contains("floating point")
        || msg.contains("invalid value: integer")
        || msg.contains("number out of range")
}

/// Canonical text: pretty JSON with sorted maps. Parsing it gives back an
/// equal document.
pub fn serialize_document(doc: &InstanceDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

/// A resolved, validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub document: InstanceDocument,
    pub economy: Economy,
    pub prefs: Profile,
    pub objective: Objective,
    pub master: MasterList,
    pub priority: PriorityRule,
}

pub fn load_instance(text: &str, budget: &Budget) -> Result<Instance, LoadError> {
    let doc = parse_document(text)?;
    resolve(doc, budget)
}

/// Resolves identifiers and materializes the objective.
pub fn resolve(doc: InstanceDocument, budget: &Budget) -> Result<Instance, LoadError> {
    let economy = resolve_economy(&doc.economy)?;
    let prefs = resolve_preferences(&economy, &doc.preferences)?;
    let objective = resolve_objective(&economy, &doc.objective, budget)?;
    let master = match &doc.master_list {
        None => MasterList::economy_order(&economy),
        Some(names) => {
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            MasterList::from_names(&economy, &refs)
                .map_err(|e| Diagnostic::at("E150", "master_list", e.to_string()))?
        }
    };
    let priority = match doc.priority {
        None | Some(PriorityDoc::Pair) => PriorityRule::InitialPair,
        Some(PriorityDoc::School) => PriorityRule::InitialSchool,
    };
    Ok(Instance {
        document: doc,
        economy,
        prefs,
        objective,
        master,
        priority,
    })
}

fn duplicates<'a>(field: &str, ids: impl Iterator<Item = &'a String>) -> Result<(), Diagnostic> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if id == NONE_TOKEN {
            return Err(Diagnostic::at("E122", field, format!("{NONE_TOKEN} is reserved")));
        }
        if !seen.insert(id) {
            return Err(Diagnostic::at("E122", field, format!("duplicate id {id}")));
        }
    }
    Ok(())
}

fn resolve_economy(doc: &EconomyDoc) -> Result<Economy, Diagnostic> {
    duplicates("economy.schools", doc.schools.iter().map(|s| &s.id))?;
    duplicates("economy.types", doc.types.iter())?;
    duplicates("economy.students", doc.students.iter().map(|s| &s.id))?;
    let with_district = doc.schools.iter().filter(|s| s.district.is_some()).count();
    if with_district != 0 && with_district != doc.schools.len() {
        return Err(Diagnostic::at(
            "E113",
            "economy.schools",
            "districts must be given for every school or for none",
        ));
    }
    for s in &doc.students {
        if !doc.types.contains(&s.student_type) {
            return Err(Diagnostic::at(
                "E112",
                format!("economy.students.{}", s.id),
                format!("unknown type {}", s.student_type),
            ));
        }
    }
    let mut load: BTreeMap<&str, u32> = BTreeMap::new();
    for (student, school) in &doc.initial_matching {
        let field = format!("economy.initial_matching.{student}");
        if !doc.students.iter().any(|s| &s.id == student) {
            return Err(Diagnostic::at("E111", field, format!("unknown student {student}")));
        }
        if school == NONE_TOKEN {
            continue;
        }
        let Some(sd) = doc.schools.iter().find(|s| &s.id == school) else {
            return Err(Diagnostic::at("E110", field, format!("unknown school {school}")));
        };
        let l = load.entry(school.as_str()).or_default();
        *l += 1;
        if *l > sd.capacity {
            return Err(Diagnostic::at(
                "E130",
                field,
                format!("school {school} has capacity {} but receives more students", sd.capacity),
            ));
        }
    }

    let mut b = Economy::builder().types(doc.types.iter().cloned());
    for s in &doc.schools {
        b = match &s.district {
            Some(d) => b.school_in(s.id.clone(), s.capacity, d.clone()),
            None => b.school(s.id.clone(), s.capacity),
        };
    }
    for s in &doc.students {
        let init = doc
            .initial_matching
            .get(&s.id)
            .map(String::as_str)
            .filter(|c| *c != NONE_TOKEN);
        b = b.student(s.id.clone(), s.student_type.clone(), init);
    }
    b.build()
        .map_err(|e| Diagnostic::at("E101", "economy", e.to_string()))
}

fn resolve_preferences(
    economy: &Economy,
    doc: &BTreeMap<String, Vec<String>>,
) -> Result<Profile, Diagnostic> {
    for student in doc.keys() {
        if economy.student_index(student).is_none() {
            return Err(Diagnostic::at(
                "E111",
                format!("preferences.{student}"),
                format!("unknown student {student}"),
            ));
        }
    }
    let mut prefs = Vec::with_capacity(economy.num_students());
    for s in economy.all_students() {
        let name = economy.student_name(s);
        let field = format!("preferences.{name}");
        let ranking = doc
            .get(name)
            .ok_or_else(|| Diagnostic::at("E122", field.clone(), "missing preference"))?;
        let mut seen = BTreeSet::new();
        let mut choices = Vec::with_capacity(ranking.len());
        for entry in ranking {
            if !seen.insert(entry) {
                return Err(Diagnostic::at("E121", field, format!("{entry} listed twice")));
            }
            if entry == NONE_TOKEN {
                choices.push(None);
            } else {
                let c = economy
                    .school_index(entry)
                    .ok_or_else(|| Diagnostic::at("E110", field.clone(), format!("unknown school {entry}")))?;
                choices.push(Some(c));
            }
        }
        if !seen.contains(&NONE_TOKEN.to_owned()) {
            return Err(Diagnostic::at("E120", field, format!("ranking omits {NONE_TOKEN}")));
        }
        if let Some(c) = economy.schools().iter().find(|c| !seen.contains(c)) {
            return Err(Diagnostic::at("E120", field, format!("ranking omits school {c}")));
        }
        prefs.push(
            Preference::new(economy, choices)
                .map_err(|e| Diagnostic::at("E120", field, e.to_string()))?,
        );
    }
    Profile::new(economy, prefs).map_err(|e| Diagnostic::at("E101", "preferences", e.to_string()))
}

fn objective_error(e: Error) -> LoadError {
    match e {
        Error::BudgetExceeded { .. } => LoadError::Budget(e),
        other => Diagnostic::at("E140", "objective", other.to_string()).into(),
    }
}

fn resolve_objective(economy: &Economy, doc: &ObjectiveDoc, budget: &Budget) -> Result<Objective, LoadError> {
    let (metric, goal) = match doc {
        ObjectiveDoc::Tabulated { entries, default } => {
            return resolve_tabulated(economy, entries, default.as_ref(), budget);
        }
        ObjectiveDoc::Chebyshev { goal } => (Metric::Chebyshev, goal),
        ObjectiveDoc::Discrete { goal } => (Metric::Discrete, goal),
        ObjectiveDoc::Manhattan { goal } => (Metric::Manhattan, goal),
    };
    let goal = resolve_goal(economy, goal, budget)?;
    Ok(Objective::from_goal(metric, goal))
}

fn parse_number(n: &NumberDoc, field: &str) -> Result<Rational64, Diagnostic> {
    match n {
        NumberDoc::Int(v) => Ok(Rational64::from_integer(*v)),
        NumberDoc::Text(t) => t
            .trim()
            .parse::<Rational64>()
            .map_err(|_| Diagnostic::at("E102", field, format!("not an integer or p/q rational: {t}"))),
    }
}

fn resolve_tabulated(
    economy: &Economy,
    entries: &[TabulatedEntry],
    default: Option<&NumberDoc>,
    budget: &Budget,
) -> Result<Objective, LoadError> {
    let mut values = BTreeMap::new();
    for (i, entry) in entries.iter().enumerate() {
        let field = format!("objective.entries[{i}]");
        let xi = Distribution::from_rows(&entry.distribution)
            .map_err(|e| Diagnostic::at("E140", field.clone(), e.to_string()))?;
        let v = parse_number(&entry.value, &field)?;
        if values.insert(xi.clone(), v).is_some() {
            return Err(Diagnostic::at("E140", field, format!("{xi} listed twice")).into());
        }
    }
    if let Some(d) = default {
        let v = parse_number(d, "objective.default")?;
        for xi in crate::model::enumerate_feasible(economy, budget).map_err(objective_error)? {
            values.entry(xi).or_insert(v);
        }
    }
    Objective::tabulated(economy, values, budget).map_err(objective_error)
}

fn school_bounds(economy: &Economy, field: &str, map: &Bounds1, init: Vec<u32>) -> Result<Vec<u32>, Diagnostic> {
    let mut out = init;
    for (k, &v) in map {
        let c = economy
            .school_index(k)
            .ok_or_else(|| Diagnostic::at("E110", field, format!("unknown school {k}")))?;
        out[c.0] = v;
    }
    Ok(out)
}

fn district_bounds(economy: &Economy, field: &str, map: &Bounds1, init: Vec<u32>) -> Result<Vec<u32>, Diagnostic> {
    let mut out = init;
    for (k, &v) in map {
        let d = economy
            .district_index(k)
            .ok_or_else(|| Diagnostic::at("E113", field, format!("unknown district {k}")))?;
        out[d.0] = v;
    }
    Ok(out)
}

fn cell_bounds(
    field: &str,
    map: &Bounds2,
    init: Vec<Vec<u32>>,
    row: impl Fn(&str) -> Option<usize>,
    row_code: &'static str,
    type_of: impl Fn(&str) -> Option<usize>,
) -> Result<Vec<Vec<u32>>, Diagnostic> {
    let mut out = init;
    for (r, cols) in map {
        let i = row(r).ok_or_else(|| Diagnostic::at(row_code, field, format!("unknown identifier {r}")))?;
        for (t, &v) in cols {
            let j = type_of(t).ok_or_else(|| Diagnostic::at("E112", field, format!("unknown type {t}")))?;
            out[i][j] = v;
        }
    }
    Ok(out)
}

fn type_bounds(economy: &Economy, floors: &Bounds2, ceilings: &Bounds2) -> Result<TypeBounds, Diagnostic> {
    let base = TypeBounds::trivial(economy);
    let row = |n: &str| economy.school_index(n).map(|c| c.0);
    let ty = |n: &str| economy.type_index(n).map(|t| t.0);
    Ok(TypeBounds {
        floors: cell_bounds("objective.goal.floors", floors, base.floors, row, "E110", ty)?,
        ceilings: cell_bounds("objective.goal.ceilings", ceilings, base.ceilings, row, "E110", ty)?,
    })
}

fn targets(economy: &Economy, map: &Bounds1) -> Result<Option<DistrictTargets>, Diagnostic> {
    if map.is_empty() {
        return Ok(None);
    }
    let init = DistrictTargets::initial(economy).0;
    Ok(Some(DistrictTargets(district_bounds(
        economy,
        "objective.goal.targets",
        map,
        init,
    )?)))
}

fn resolve_goal(economy: &Economy, doc: &GoalDoc, budget: &Budget) -> Result<PolicyGoal, LoadError> {
    let goal = match doc {
        GoalDoc::Quota { floors, ceilings } => {
            let base = QuotaBounds::trivial(economy);
            let bounds = QuotaBounds {
                floors: school_bounds(economy, "objective.goal.floors", floors, base.floors)?,
                ceilings: school_bounds(economy, "objective.goal.ceilings", ceilings, base.ceilings)?,
            };
            build_quota_goal(economy, &bounds, budget)
        }
        GoalDoc::Diversity { floors, ceilings } => {
            build_diversity_goal(economy, &type_bounds(economy, floors, ceilings)?, budget)
        }
        GoalDoc::Exchange { targets: t } => {
            build_exchange_feasibility_goal(economy, targets(economy, t)?.as_ref(), budget)
        }
        GoalDoc::Balanced { targets: t } => {
            build_balanced_exchange_goal(economy, targets(economy, t)?.as_ref(), budget)
        }
        GoalDoc::DiversityExchange {
            floors,
            ceilings,
            targets: t,
        } => build_combined_goal(
            economy,
            &type_bounds(economy, floors, ceilings)?,
            targets(economy, t)?.as_ref(),
            DistrictMode::ExchangeFeasibility,
            budget,
        ),
        GoalDoc::DiversityBalanced {
            floors,
            ceilings,
            targets: t,
        } => build_combined_goal(
            economy,
            &type_bounds(economy, floors, ceilings)?,
            targets(economy, t)?.as_ref(),
            DistrictMode::Balanced,
            budget,
        ),
        GoalDoc::DistrictDiversity { floors, ceilings } => {
            if !economy.has_districts() {
                return Err(Diagnostic::at("E113", "objective.goal", "economy has no districts").into());
            }
            let base = DistrictTypeBounds::trivial(economy);
            let row = |n: &str| economy.district_index(n).map(|d| d.0);
            let ty = |n: &str| economy.type_index(n).map(|t| t.0);
            let bounds = DistrictTypeBounds {
                floors: cell_bounds("objective.goal.floors", floors, base.floors, row, "E113", ty)?,
                ceilings: cell_bounds("objective.goal.ceilings", ceilings, base.ceilings, row, "E113", ty)?,
            };
            build_district_diversity_goal(economy, &bounds, budget)
        }
        GoalDoc::Explicit { members } => {
            let xs = members
                .iter()
                .map(|m| Distribution::from_rows(m))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Diagnostic::at("E140", "objective.goal.members", e.to_string()))?;
            PolicyGoal::new(economy, xs)
        }
    };
    goal.map_err(objective_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
  "economy": {
    "schools": [{"id": "a", "capacity": 1}, {"id": "b", "capacity": 1}],
    "types": ["x"],
    "students": [{"id": "s", "type": "x"}, {"id": "u", "type": "x"}],
    "initial_matching": {"s": "a"}
  },
  "preferences": {"s": ["b", "a", "@none"], "u": ["a", "@none", "b"]},
  "objective": {"variant": "discrete", "goal": {"builder": "quota", "ceilings": {"b": 0}}}
}"#;

    fn load(text: &str) -> Result<Instance, LoadError> {
        load_instance(text, &Budget::default())
    }

    fn code(text: &str) -> &'static str {
        match load(text) {
            Err(LoadError::Invalid(d)) => d.code,
            other => panic!("expected a diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn loads_small_instance() {
        let inst = load(SMALL).unwrap();
        assert_eq!(inst.economy.num_students(), 2);
        assert_eq!(inst.objective.goal().unwrap().len(), 2);
        assert_eq!(inst.priority, PriorityRule::InitialPair);
    }

    #[test]
    fn canonical_round_trip() {
        let doc = parse_document(SMALL).unwrap();
        let text = serialize_document(&doc);
        let again = parse_document(&text).unwrap();
        assert_eq!(doc, again);
        assert_eq!(serialize_document(&again), text);
    }

    #[test]
    fn truncated_text_reports_position() {
        let d = parse_document(&SMALL[..40]).unwrap_err();
        assert_eq!(d.code, "E100");
        assert!(d.line.is_some() && d.column.is_some());
    }

    #[test]
    fn diagnostic_codes() {
        assert_eq!(code(&SMALL.replace("\"capacity\": 1}, {\"id\": \"b\"", "\"capacity\": -1}, {\"id\": \"b\"")), "E102");
        assert_eq!(code(&SMALL.replace("\"capacity\": 1}, {\"id\": \"b\"", "\"capacity\": 1.5}, {\"id\": \"b\"")), "E102");
        assert_eq!(code(&SMALL.replace("\"types\"", "\"kinds\"")), "E101");
        assert_eq!(code(&SMALL.replace("[\"b\", \"a\", \"@none\"]", "[\"b\", \"z\", \"@none\"]")), "E110");
        assert_eq!(code(&SMALL.replace("{\"s\": \"a\"}", "{\"q\": \"a\"}")), "E111");
        assert_eq!(code(&SMALL.replace("\"type\": \"x\"}, {\"id\": \"u\"", "\"type\": \"y\"}, {\"id\": \"u\"")), "E112");
        assert_eq!(code(&SMALL.replace("[\"b\", \"a\", \"@none\"]", "[\"b\", \"@none\"]")), "E120");
        assert_eq!(code(&SMALL.replace("[\"b\", \"a\", \"@none\"]", "[\"b\", \"b\", \"a\", \"@none\"]")), "E121");
        assert_eq!(code(&SMALL.replace("{\"s\": \"a\"}", "{\"s\": \"a\", \"u\": \"a\"}")), "E130");
        assert_eq!(code(&SMALL.replace("\"ceilings\": {\"b\": 0}", "\"floors\": {\"a\": 2}")), "E140");
        assert_eq!(code(&SMALL.replace("\"objective\"", "\"master_list\": [\"s\", \"s\"], \"objective\"")), "E150");
    }

    #[test]
    fn budget_is_not_a_parse_error() {
        let tight = Budget {
            distributions: 2,
            ..Budget::default()
        };
        assert!(matches!(load_instance(SMALL, &tight), Err(LoadError::Budget(_))));
    }
}
