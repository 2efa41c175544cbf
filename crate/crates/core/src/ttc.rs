//! Top Trading Cycles on the hypothetical market of school-type pairs.
//!
//! Every (school, type) pair plus the outside pair is an option. Options are
//! never consumed: an option leaves the market only once no remaining student
//! is permissible to it. Students trade along the cycles of the pointing graph
//! until everyone has been processed.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::model::{induced_distribution, Choice, Distribution, Economy, Matching, Profile, Preference, School, Student, StudentType};
use crate::objectives::{Evaluator, Value};

/// A node on the option side of the hypothetical market.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarketOption {
    Pair(School, StudentType),
    /// `(∅, ∅)`: staying unassigned.
    Outside,
}

impl MarketOption {
    /// Dense index: `c * |T| + t` for pairs, `|C| * |T|` for the outside pair.
    pub fn index(self, economy: &Economy) -> usize {
        match self {
            MarketOption::Pair(c, t) => c.0 * economy.num_types() + t.0,
            MarketOption::Outside => economy.num_cells(),
        }
    }

    pub fn from_index(economy: &Economy, i: usize) -> Self {
        if i == economy.num_cells() {
            MarketOption::Outside
        } else {
            let t = economy.num_types();
            MarketOption::Pair(School(i / t), StudentType(i % t))
        }
    }

    /// All options, pairs by (school, type) position, the outside pair last.
    pub fn all(economy: &Economy) -> impl Iterator<Item = MarketOption> + '_ {
        (0..=economy.num_cells()).map(move |i| MarketOption::from_index(economy, i))
    }

    /// The option standing for `choice` for a student of type `t`.
    pub fn for_choice(choice: Choice, t: StudentType) -> Self {
        match choice {
            Some(c) => MarketOption::Pair(c, t),
            None => MarketOption::Outside,
        }
    }

    pub fn school(self) -> Choice {
        match self {
            MarketOption::Pair(c, _) => Some(c),
            MarketOption::Outside => None,
        }
    }

    fn cell(self) -> Option<(School, StudentType)> {
        match self {
            MarketOption::Pair(c, t) => Some((c, t)),
            MarketOption::Outside => None,
        }
    }

    pub fn label(self, economy: &Economy) -> String {
        match self {
            MarketOption::Pair(c, t) => {
                format!("({},{})", economy.school_name(c), economy.type_name(t))
            }
            MarketOption::Outside => "(@none,@none)".to_owned(),
        }
    }
}

/// A student's strict ranking over every option of the hypothetical market.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiftedPreference {
    ranking: Vec<MarketOption>,
    // rank of each option by dense index
    position: Vec<usize>,
}

impl LiftedPreference {
    pub fn ranking(&self) -> &[MarketOption] {
        &self.ranking
    }

    pub fn rank(&self, economy: &Economy, option: MarketOption) -> usize {
        self.position[option.index(economy)]
    }
}

/// Own-type pairs and the outside pair in the order of `pref`, followed by
/// every other-type pair in (school, type) order.
pub fn lift_preference(economy: &Economy, student: Student, pref: &Preference) -> LiftedPreference {
    let own = economy.type_of(student);
    let mut ranking: Vec<MarketOption> = pref
        .ranking()
        .iter()
        .map(|&choice| MarketOption::for_choice(choice, own))
        .collect();
    ranking.extend(MarketOption::all(economy).filter(|o| matches!(o, MarketOption::Pair(_, t) if *t != own)));
    let mut position = vec![0; economy.num_cells() + 1];
    for (r, o) in ranking.iter().enumerate() {
        position[o.index(economy)] = r;
    }
    LiftedPreference { ranking, position }
}

/// A strict priority order over all students used to break ties.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MasterList {
    order: Vec<Student>,
}

impl MasterList {
    pub fn new(economy: &Economy, order: Vec<Student>) -> Result<Self> {
        let n = economy.num_students();
        if order.len() != n {
            return Err(Error::InvalidMasterList(format!(
                "{} entries for {n} students",
                order.len()
            )));
        }
        let mut seen = vec![false; n];
        for s in &order {
            match seen.get_mut(s.0) {
                Some(slot) if !*slot => *slot = true,
                Some(_) => {
                    return Err(Error::InvalidMasterList(format!(
                        "student {} listed twice",
                        economy.student_name(*s)
                    )))
                }
                None => {
                    return Err(Error::InvalidMasterList(format!(
                        "student index {} out of range",
                        s.0
                    )))
                }
            }
        }
        Ok(MasterList { order })
    }

    pub fn from_names(economy: &Economy, names: &[&str]) -> Result<Self> {
        let order = names
            .iter()
            .map(|n| {
                economy
                    .student_index(n)
                    .ok_or_else(|| Error::InvalidMasterList(format!("unknown student {n}")))
            })
            .collect::<Result<Vec<_>>>()?;
        MasterList::new(economy, order)
    }

    /// The economy's student order.
    pub fn economy_order(economy: &Economy) -> Self {
        MasterList {
            order: economy.all_students().collect(),
        }
    }

    pub fn order(&self) -> &[Student] {
        &self.order
    }
}

/// Who belongs to an option's top priority class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PriorityRule {
    /// Students initially holding exactly the pair `(c, t)`.
    #[default]
    InitialPair,
    /// Students initially at school `c`, of any type.
    InitialSchool,
}

fn is_owner(economy: &Economy, rule: PriorityRule, student: Student, option: MarketOption) -> bool {
    let initial = economy.initial_matching().get(student);
    match (option, rule) {
        (MarketOption::Outside, _) => initial.is_none(),
        (MarketOption::Pair(c, t), PriorityRule::InitialPair) => {
            initial == Some(c) && economy.type_of(student) == t
        }
        (MarketOption::Pair(c, _), PriorityRule::InitialSchool) => initial == Some(c),
    }
}

/// Owners of `option` first, then everyone else; both classes in master-list order.
pub fn priority_order(
    economy: &Economy,
    master: &MasterList,
    option: MarketOption,
    rule: PriorityRule,
) -> Vec<Student> {
    let (mut owners, others): (Vec<Student>, Vec<Student>) = master
        .order()
        .iter()
        .partition(|&&s| is_owner(economy, rule, s, option));
    owners.extend(others);
    owners
}

/// `f(xi(mu) - chi_{initial} + chi_{option}) >= f(xi(mu_0))`, where `student`
/// still occupies her initial slot in `mu`.
pub fn is_permissible(
    f: &dyn Evaluator,
    economy: &Economy,
    current: &Matching,
    student: Student,
    option: MarketOption,
) -> bool {
    let baseline = f.value(&induced_distribution(economy, economy.initial_matching()));
    let xi = induced_distribution(economy, current);
    permissible_at(f, economy, &xi, baseline, student, option)
}

fn permissible_at(
    f: &dyn Evaluator,
    economy: &Economy,
    xi: &Distribution,
    baseline: Value,
    student: Student,
    option: MarketOption,
) -> bool {
    let home = economy
        .initial_matching()
        .get(student)
        .map(|c| (c, economy.type_of(student)));
    match xi.moved(home, option.cell()) {
        Some(next) => f.value(&next) >= baseline,
        None => false,
    }
}

/// A cycle `s_0 -> o_0 -> s_1 -> o_1 -> ... -> s_0`; student `s_k` receives `o_k`.
/// Rotated so that `s_0` is the smallest student index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    pub students: Vec<Student>,
    pub options: Vec<MarketOption>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.students.len()
    }

    pub fn is_empty(&self) -> bool {
        self.students.is_empty()
    }

    pub fn display<'a>(&'a self, economy: &'a Economy) -> impl fmt::Display + 'a {
        CycleDisplay {
            cycle: self,
            economy,
        }
    }
}

struct CycleDisplay<'a> {
    cycle: &'a Cycle,
    economy: &'a Economy,
}

impl fmt::Display for CycleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, o) in self.cycle.students.iter().zip(&self.cycle.options) {
            write!(
                f,
                "{} -> {} -> ",
                self.economy.student_name(*s),
                o.label(self.economy)
            )?;
        }
        f.write_str(self.economy.student_name(self.cycle.students[0]))
    }
}

/// One round of the algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TtcStep {
    /// Executed assignments so far plus initial slots of everyone else.
    pub matching: Matching,
    /// `f(xi(matching))`.
    pub value: Value,
    /// Options that left the market at this step.
    pub removed: Vec<MarketOption>,
    /// Remaining options and the student each points to.
    pub option_pointers: Vec<(MarketOption, Student)>,
    /// Remaining students and the option each points to.
    pub student_pointers: Vec<(Student, MarketOption)>,
    /// Cycles executed at this step, ordered by their first student.
    pub cycles: Vec<Cycle>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TtcTrace {
    pub initial_value: Value,
    pub steps: Vec<TtcStep>,
    /// Steps after which `f` fell below its initial value.
    pub warnings: Vec<String>,
}

impl TtcTrace {
    /// Applies every executed cycle to `mu_0`.
    pub fn replay(&self, economy: &Economy) -> Result<Matching> {
        let mut assignment = economy.initial_matching().assignment().to_vec();
        for step in &self.steps {
            for cycle in &step.cycles {
                for (s, o) in cycle.students.iter().zip(&cycle.options) {
                    assignment[s.0] = o.school();
                }
            }
        }
        economy.matching(assignment)
    }

    /// DOT digraph of step `n` (zero-based). Cycle edges are drawn bold.
    pub fn to_dot(&self, economy: &Economy, n: usize) -> String {
        let step = &self.steps[n];
        let mut in_cycle = std::collections::HashSet::new();
        for cycle in &step.cycles {
            let k = cycle.len();
            for i in 0..k {
                in_cycle.insert((cycle.students[i], cycle.options[i], true));
                in_cycle.insert((cycle.students[(i + 1) % k], cycle.options[i], false));
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "digraph step{} {{", n + 1);
        out.push_str("  rankdir=LR;\n");
        for (s, _) in &step.student_pointers {
            let _ = writeln!(out, "  \"{}\" [shape=circle];", economy.student_name(*s));
        }
        for (o, _) in &step.option_pointers {
            let _ = writeln!(out, "  \"{}\" [shape=box];", o.label(economy));
        }
        for o in &step.removed {
            let _ = writeln!(
                out,
                "  \"{}\" [shape=box, style=dashed, color=gray];",
                o.label(economy)
            );
        }
        let bold = " [penwidth=3, color=red]";
        for (s, o) in &step.student_pointers {
            let mark = if in_cycle.contains(&(*s, *o, true)) { bold } else { "" };
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\"{mark};",
                economy.student_name(*s),
                o.label(economy)
            );
        }
        for (o, s) in &step.option_pointers {
            let mark = if in_cycle.contains(&(*s, *o, false)) { bold } else { "" };
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\"{mark};",
                o.label(economy),
                economy.student_name(*s)
            );
        }
        out.push_str("}\n");
        out
    }
}

/// The mechanism with its fixed inputs: objective, master list and priority rule.
#[derive(Clone, Copy)]
pub struct Ttc<'a> {
    pub economy: &'a Economy,
    pub objective: &'a dyn Evaluator,
    pub master: &'a MasterList,
    pub rule: PriorityRule,
}

impl<'a> Ttc<'a> {
    pub fn new(economy: &'a Economy, objective: &'a dyn Evaluator, master: &'a MasterList) -> Self {
        Ttc {
            economy,
            objective,
            master,
            rule: PriorityRule::default(),
        }
    }

    pub fn with_rule(mut self, rule: PriorityRule) -> Self {
        self.rule = rule;
        self
    }

    /// Outcome only.
    pub fn outcome(&self, prefs: &Profile) -> Result<Matching> {
        self.run(prefs).map(|(m, _)| m)
    }

    pub fn run(&self, prefs: &Profile) -> Result<(Matching, TtcTrace)> {
        let e = self.economy;
        let f = self.objective;
        let mu0 = e.initial_matching();
        let baseline = f.value(&induced_distribution(e, mu0));
        if !baseline.is_finite() {
            return Err(Error::Precondition(
                "objective is -inf at the initial distribution".into(),
            ));
        }
        let n = e.num_students();
        let n_opts = e.num_cells() + 1;
        let lifted: Vec<LiftedPreference> = e
            .all_students()
            .map(|s| lift_preference(e, s, prefs.get(s)))
            .collect();
        let priorities: Vec<Vec<Student>> = MarketOption::all(e)
            .map(|o| priority_order(e, self.master, o, self.rule))
            .collect();

        let mut assigned: Vec<Option<MarketOption>> = vec![None; n];
        let mut option_alive = vec![true; n_opts];
        let mut remaining = n;
        let mut steps = Vec::new();
        let mut warnings = Vec::new();

        while remaining > 0 {
            let current = self.working_matching(&assigned)?;
            let xi = induced_distribution(e, &current);
            let value = f.value(&xi);

            let mut removed = Vec::new();
            let mut option_target: Vec<Option<Student>> = vec![None; n_opts];
            for (i, prio) in priorities.iter().enumerate() {
                if !option_alive[i] {
                    continue;
                }
                let o = MarketOption::from_index(e, i);
                let pick = prio
                    .iter()
                    .copied()
                    .find(|&s| assigned[s.0].is_none() && permissible_at(f, e, &xi, baseline, s, o));
                match pick {
                    Some(s) => option_target[i] = Some(s),
                    None => {
                        option_alive[i] = false;
                        removed.push(o);
                    }
                }
            }

            let mut student_target: Vec<Option<MarketOption>> = vec![None; n];
            for s in e.all_students().filter(|s| assigned[s.0].is_none()) {
                let top = lifted[s.0]
                    .ranking()
                    .iter()
                    .copied()
                    .find(|o| option_alive[o.index(e)])
                    .ok_or_else(|| {
                        Error::Invariant(format!(
                            "student {} has no remaining option",
                            e.student_name(s)
                        ))
                    })?;
                if let MarketOption::Pair(_, t) = top {
                    if t != e.type_of(s) {
                        return Err(Error::Invariant(format!(
                            "student {} points to other-type option {}",
                            e.student_name(s),
                            top.label(e)
                        )));
                    }
                }
                student_target[s.0] = Some(top);
            }

            let cycles = find_cycles(e, &student_target, &option_target);
            if cycles.is_empty() {
                return Err(Error::Invariant("pointing graph has no cycle".into()));
            }
            for cycle in &cycles {
                for (s, o) in cycle.students.iter().zip(&cycle.options) {
                    assigned[s.0] = Some(*o);
                    remaining -= 1;
                }
            }

            steps.push(TtcStep {
                matching: current,
                value,
                removed,
                option_pointers: option_target
                    .iter()
                    .enumerate()
                    .filter_map(|(i, s)| s.map(|s| (MarketOption::from_index(e, i), s)))
                    .collect(),
                student_pointers: student_target
                    .iter()
                    .enumerate()
                    .filter_map(|(s, o)| o.map(|o| (Student(s), o)))
                    .collect(),
                cycles,
            });

            let after = f.value(&induced_distribution(e, &self.working_matching(&assigned)?));
            if after < baseline {
                warnings.push(format!(
                    "after step {}: objective {after} is below its initial value {baseline}",
                    steps.len()
                ));
            }
        }

        let outcome = self.working_matching(&assigned)?;
        Ok((
            outcome,
            TtcTrace {
                initial_value: baseline,
                steps,
                warnings,
            },
        ))
    }

    fn working_matching(&self, assigned: &[Option<MarketOption>]) -> Result<Matching> {
        let init = self.economy.initial_matching();
        let assignment: Vec<Choice> = assigned
            .iter()
            .enumerate()
            .map(|(s, o)| o.map_or(init.get(Student(s)), MarketOption::school))
            .collect();
        self.economy
            .matching(assignment)
            .map_err(|err| Error::Invariant(format!("executed cycles overfill a school: {err}")))
    }
}

/// Cycles of the student -> option -> student functional graph.
fn find_cycles(
    economy: &Economy,
    student_target: &[Option<MarketOption>],
    option_target: &[Option<Student>],
) -> Vec<Cycle> {
    let next = |s: Student| -> Student {
        let o = student_target[s.0].expect("remaining student points");
        option_target[o.index(economy)].expect("alive option points")
    };
    // 0 unvisited, 1 on current walk, 2 done
    let mut state = vec![0u8; student_target.len()];
    let mut cycles = Vec::new();
    for start in 0..student_target.len() {
        if student_target[start].is_none() || state[start] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut s = Student(start);
        while state[s.0] == 0 {
            state[s.0] = 1;
            walk.push(s);
            s = next(s);
        }
        if state[s.0] == 1 {
            let from = walk.iter().position(|&x| x == s).expect("on walk");
            let mut students: Vec<Student> = walk[from..].to_vec();
            let lowest = students.iter().enumerate().min_by_key(|(_, x)| **x).map(|(i, _)| i).unwrap_or(0);
            students.rotate_left(lowest);
            let options = students
                .iter()
                .map(|s| student_target[s.0].expect("points"))
                .collect();
            cycles.push(Cycle { students, options });
        }
        for x in walk {
            state[x.0] = 2;
        }
    }
    cycles.sort_by_key(|c| c.students[0]);
    cycles
}

/// Runs TTC with the default priority rule.
pub fn run_ttc(
    economy: &Economy,
    objective: &dyn Evaluator,
    master: &MasterList,
    prefs: &Profile,
) -> Result<(Matching, TtcTrace)> {
    Ttc::new(economy, objective, master).run(prefs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Budget, Preference};
    use crate::objectives::{build_diversity_goal, Objective, ObjectiveTable, TypeBounds};

    fn appendix_a() -> Economy {
        Economy::builder()
            .school("c1", 3)
            .school("c2", 2)
            .school("c3", 1)
            .school("c4", 1)
            .types(["t1", "t2"])
            .student("s1", "t1", Some("c1"))
            .student("s2", "t1", Some("c1"))
            .student("s3", "t1", Some("c2"))
            .student("s4", "t1", None)
            .student("s5", "t2", None)
            .student("s6", "t2", Some("c3"))
            .student("s7", "t2", Some("c4"))
            .build()
            .unwrap()
    }

    fn appendix_a_objective(e: &Economy) -> ObjectiveTable {
        let mut b = TypeBounds::trivial(e);
        b.ceilings[0] = vec![2, 1];
        b.ceilings[1] = vec![1, 1];
        let goal = build_diversity_goal(e, &b, &Budget::default()).unwrap();
        ObjectiveTable::build(e, &Objective::DiscreteMetricToGoal(goal), &Budget::default()).unwrap()
    }

    fn prefs(e: &Economy, rows: &[&[&str]]) -> Profile {
        let p = rows
            .iter()
            .map(|r| Preference::from_names(e, r).unwrap())
            .collect();
        Profile::new(e, p).unwrap()
    }

    fn appendix_a_prefs(e: &Economy) -> Profile {
        prefs(
            e,
            &[
                &["c2", "c3", "c1", "c4", "@none"],
                &["c3", "c1", "c2", "c4", "@none"],
                &["c4", "c2", "c1", "c3", "@none"],
                &["c3", "c1", "@none", "c2", "c4"],
                &["c1", "c2", "@none", "c3", "c4"],
                &["c4", "c3", "c1", "c2", "@none"],
                &["c2", "c3", "c4", "c1", "@none"],
            ],
        )
    }

    #[test]
    fn lifted_preference_keeps_own_type_order() {
        let e = appendix_a();
        let p = appendix_a_prefs(&e);
        let l = lift_preference(&e, Student(0), p.get(Student(0)));
        let t1 = StudentType(0);
        assert_eq!(
            &l.ranking()[..5],
            &[
                MarketOption::Pair(School(1), t1),
                MarketOption::Pair(School(2), t1),
                MarketOption::Pair(School(0), t1),
                MarketOption::Pair(School(3), t1),
                MarketOption::Outside,
            ]
        );
        assert_eq!(l.ranking().len(), 9);
        assert!(l.ranking()[5..]
            .iter()
            .all(|o| matches!(o, MarketOption::Pair(_, t) if *t == StudentType(1))));
    }

    #[test]
    fn priority_classes() {
        let e = appendix_a();
        let m = MasterList::economy_order(&e);
        let p = priority_order(&e, &m, MarketOption::Pair(School(0), StudentType(0)), PriorityRule::InitialPair);
        assert_eq!(&p[..2], &[Student(0), Student(1)]);
        let p = priority_order(&e, &m, MarketOption::Outside, PriorityRule::InitialPair);
        assert_eq!(&p[..2], &[Student(3), Student(4)]);
        let p = priority_order(&e, &m, MarketOption::Pair(School(1), StudentType(1)), PriorityRule::InitialSchool);
        assert_eq!(p[0], Student(2));
        assert!(MasterList::from_names(&e, &["s1", "s1", "s2", "s3", "s4", "s5", "s6"]).is_err());
    }

    #[test]
    fn permissibility_examples() {
        let e = appendix_a();
        let f = appendix_a_objective(&e);
        let mu0 = e.initial_matching();
        assert!(is_permissible(&f, &e, mu0, Student(0), MarketOption::Pair(School(0), StudentType(1))));
        assert!(is_permissible(&f, &e, mu0, Student(0), MarketOption::Pair(School(0), StudentType(0))));
    }

    #[test]
    fn appendix_a_outcome_under_both_rules() {
        let e = appendix_a();
        let f = appendix_a_objective(&e);
        let m = MasterList::economy_order(&e);
        let p = appendix_a_prefs(&e);
        let want = e
            .matching_by_name(&["c2", "c1", "c4", "c1", "c1", "c3", "c2"])
            .unwrap();
        for rule in [PriorityRule::InitialPair, PriorityRule::InitialSchool] {
            let (mu, trace) = Ttc::new(&e, &f, &m).with_rule(rule).run(&p).unwrap();
            assert_eq!(mu, want, "{rule:?}");
            assert_eq!(trace.replay(&e).unwrap(), mu);
            assert!(trace.warnings.is_empty());
        }
    }

    #[test]
    fn everyone_home_keeps_initial_matching() {
        let e = appendix_a();
        let f = appendix_a_objective(&e);
        let m = MasterList::economy_order(&e);
        let home: Vec<Preference> = e
            .all_students()
            .map(|s| {
                let init = e.initial_matching().get(s);
                Preference::completed(&e, &[init]).unwrap()
            })
            .collect();
        let p = Profile::new(&e, home).unwrap();
        let (mu, trace) = run_ttc(&e, &f, &m, &p).unwrap();
        assert_eq!(&mu, e.initial_matching());
        // one owner of each shared initial pair leaves per step: (c1,t1) and
        // the outside pair each have two
        assert_eq!(trace.steps.len(), 2);
        assert!(trace
            .steps
            .iter()
            .all(|st| st.cycles.iter().all(|c| c.len() == 1)));
    }

    #[test]
    fn dot_marks_cycle_edges() {
        let e = appendix_a();
        let f = appendix_a_objective(&e);
        let m = MasterList::economy_order(&e);
        let (_, trace) = Ttc::new(&e, &f, &m)
            .with_rule(PriorityRule::InitialSchool)
            .run(&appendix_a_prefs(&e))
            .unwrap();
        let dot = trace.to_dot(&e, 0);
        assert!(dot.starts_with("digraph step1 {"));
        assert!(dot.contains("\"s7\" -> \"(c2,t2)\" [penwidth=3"));
        assert!(dot.contains("\"(c4,t1)\" -> \"s7\" [penwidth=3"));
    }
}
