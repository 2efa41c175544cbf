//! Brute-force oracles for the four desiderata.
//!
//! Everything here enumerates: all capacity-respecting matchings for
//! efficiency, all (or seeded random) misreports for strategy-proofness.
//! Parallel searches always return the first failure in enumeration order.

use std::fmt;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    induced_distribution, is_individually_rational, pareto_dominates, Budget, Choice, Economy,
    Matching, Preference, Profile, School, Student,
};
use crate::objectives::{weakly_improves, Evaluator, Value};
use crate::ttc::Ttc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    WeakImprovement,
    IndividualRationality,
    ConstrainedEfficiency,
    StrategyProofness,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::WeakImprovement => "improve",
            Property::IndividualRationality => "ir",
            Property::ConstrainedEfficiency => "efficient",
            Property::StrategyProofness => "strategyproof",
        })
    }
}

/// Evidence that a property fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `f(xi(mu)) < f(xi(mu_0))`.
    ObjectiveDrop { initial: Value, outcome: Value },
    /// A student strictly prefers her initial assignment.
    BlockingStudent {
        student: Student,
        outcome: Choice,
        initial: Choice,
    },
    /// An improving matching that Pareto-dominates the one checked.
    Dominated(Matching),
    /// Reporting `report` gets `student` the strictly better `outcome`.
    Misreport {
        student: Student,
        report: Preference,
        truthful: Choice,
        outcome: Choice,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub property: Property,
    pub passed: bool,
    pub witness: Option<Witness>,
    /// Candidates examined: matchings, or mechanism runs.
    pub search_size: u64,
    /// Seed of a sampled search.
    pub seed: Option<u64>,
}

impl VerificationReport {
    fn new(property: Property, witness: Option<Witness>, search_size: u64) -> Self {
        VerificationReport {
            property,
            passed: witness.is_none(),
            witness,
            search_size,
            seed: None,
        }
    }

    /// One line per fact, `key=value`, stable across runs.
    pub fn render(&self, economy: &Economy) -> String {
        let mut lines = vec![
            format!("property={}", self.property),
            format!("verdict={}", if self.passed { "PASS" } else { "FAIL" }),
            format!("search_size={}", self.search_size),
        ];
        if let Some(seed) = self.seed {
            lines.push(format!("seed={seed}"));
        }
        match &self.witness {
            None => {}
            Some(Witness::ObjectiveDrop { initial, outcome }) => {
                lines.push(format!("witness=objective {outcome} < initial {initial}"));
            }
            Some(Witness::BlockingStudent {
                student,
                outcome,
                initial,
            }) => lines.push(format!(
                "witness=student {} prefers initial {} to {}",
                economy.student_name(*student),
                economy.choice_name(*initial),
                economy.choice_name(*outcome)
            )),
            Some(Witness::Dominated(m)) => {
                lines.push(format!("witness=dominated by {}", m.display(economy)));
            }
            Some(Witness::Misreport {
                student,
                report,
                truthful,
                outcome,
            }) => lines.push(format!(
                "witness=student {} reports [{}] and gets {} instead of {}",
                economy.student_name(*student),
                report.ranking().iter().map(|c| economy.choice_name(*c)).join(","),
                economy.choice_name(*outcome),
                economy.choice_name(*truthful)
            )),
        }
        lines.join("\n")
    }
}

/// Every capacity-respecting assignment, lexicographic with `None` before
/// schools in position order.
pub struct Matchings {
    capacities: Vec<u32>,
    // 0 = unassigned, c + 1 = school c
    digits: Vec<usize>,
    load: Vec<u32>,
    done: bool,
}

impl Iterator for Matchings {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if self.done {
            return None;
        }
        let out = Matching::from_trusted(
            self.digits
                .iter()
                .map(|&d| d.checked_sub(1).map(School))
                .collect(),
        );
        self.advance();
        Some(out)
    }
}

impl Matchings {
    fn advance(&mut self) {
        let schools = self.capacities.len();
        for i in (0..self.digits.len()).rev() {
            if self.digits[i] > 0 {
                self.load[self.digits[i] - 1] -= 1;
            }
            for v in self.digits[i] + 1..=schools {
                if self.load[v - 1] < self.capacities[v - 1] {
                    self.digits[i] = v;
                    self.load[v - 1] += 1;
                    return;
                }
            }
            self.digits[i] = 0;
        }
        self.done = true;
    }
}

/// Size of the raw assignment space `(|C| + 1)^|S|`, saturating.
pub fn assignment_space(economy: &Economy) -> u128 {
    let base = economy.num_schools() as u128 + 1;
    (0..economy.num_students()).fold(1u128, |acc, _| acc.saturating_mul(base))
}

pub fn enumerate_matchings(economy: &Economy, budget: &Budget) -> Result<Matchings> {
    Budget::check("matching", assignment_space(economy), budget.matchings)?;
    Ok(Matchings {
        capacities: economy.capacities().to_vec(),
        digits: vec![0; economy.num_students()],
        load: vec![0; economy.num_schools()],
        done: false,
    })
}

pub fn check_weak_improvement(f: &dyn Evaluator, economy: &Economy, mu: &Matching) -> VerificationReport {
    let witness = (!weakly_improves(f, economy, mu)).then(|| Witness::ObjectiveDrop {
        initial: f.value(&induced_distribution(economy, economy.initial_matching())),
        outcome: f.value(&induced_distribution(economy, mu)),
    });
    VerificationReport::new(Property::WeakImprovement, witness, 1)
}

pub fn check_individual_rationality(economy: &Economy, prefs: &Profile, mu: &Matching) -> VerificationReport {
    let mu0 = economy.initial_matching();
    let witness = economy
        .all_students()
        .find(|&s| prefs.get(s).prefers(mu0.get(s), mu.get(s)))
        .map(|s| Witness::BlockingStudent {
            student: s,
            outcome: mu.get(s),
            initial: mu0.get(s),
        });
    VerificationReport::new(Property::IndividualRationality, witness, economy.num_students() as u64)
}

/// No matching that weakly improves `f` Pareto-dominates `mu`. Fails with
/// the first such matching in enumeration order.
pub fn is_constrained_efficient(
    economy: &Economy,
    f: &dyn Evaluator,
    prefs: &Profile,
    mu: &Matching,
    budget: &Budget,
) -> Result<VerificationReport> {
    if !weakly_improves(f, economy, mu) {
        return Err(Error::Precondition(
            "constrained efficiency is defined only for matchings that weakly improve the objective"
                .into(),
        ));
    }
    let all: Vec<Matching> = enumerate_matchings(economy, budget)?.collect();
    let witness = all
        .par_iter()
        .find_first(|nu| pareto_dominates(prefs, nu, mu) && weakly_improves(f, economy, nu))
        .cloned()
        .map(Witness::Dominated);
    Ok(VerificationReport::new(
        Property::ConstrainedEfficiency,
        witness,
        all.len() as u64,
    ))
}

/// Matchings that weakly improve `f`, are individually rational and are
/// constrained efficient, in enumeration order.
pub fn enumerate_constrained_efficient_ir(
    economy: &Economy,
    f: &dyn Evaluator,
    prefs: &Profile,
    budget: &Budget,
) -> Result<Vec<Matching>> {
    // a matching dominating an IR one is IR, so dominators can be drawn
    // from the candidates themselves
    let candidates: Vec<Matching> = enumerate_matchings(economy, budget)?
        .par_bridge()
        .filter(|m| weakly_improves(f, economy, m) && is_individually_rational(economy, prefs, m))
        .collect::<Vec<_>>()
        .into_iter()
        .sorted()
        .collect();
    let ranks: Vec<Vec<usize>> = candidates
        .iter()
        .map(|m| {
            economy
                .all_students()
                .map(|s| prefs.get(s).rank(m.get(s)))
                .collect()
        })
        .collect();
    let dominates = |a: &[usize], b: &[usize]| a.iter().zip(b).all(|(x, y)| x <= y) && a != b;
    let keep: Vec<bool> = ranks
        .par_iter()
        .map(|r| !ranks.iter().any(|o| dominates(o, r)))
        .collect();
    Ok(candidates
        .into_iter()
        .zip(keep)
        .filter_map(|(m, k)| k.then_some(m))
        .collect())
}

/// Anything mapping a preference profile to a matching.
pub trait Mechanism: Sync {
    fn outcome(&self, prefs: &Profile) -> Result<Matching>;
}

impl Mechanism for Ttc<'_> {
    fn outcome(&self, prefs: &Profile) -> Result<Matching> {
        Ttc::outcome(self, prefs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Every student, every ranking of the schools and the outside option.
    Exhaustive,
    /// `samples` random (student, ranking) pairs drawn from `seed`.
    Sampled { samples: u64, seed: u64 },
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// No student gains by misreporting under `mechanism`. Fails with the first
/// profitable misreport in (student, report) order.
pub fn verify_strategy_proofness(
    economy: &Economy,
    mechanism: &dyn Mechanism,
    prefs: &Profile,
    mode: SearchMode,
    budget: &Budget,
) -> Result<VerificationReport> {
    let truthful = mechanism.outcome(prefs)?;
    let options: Vec<Choice> = std::iter::once(None)
        .chain(economy.all_schools().map(Some))
        .collect();
    let (candidates, seed): (Vec<(Student, Vec<Choice>)>, Option<u64>) = match mode {
        SearchMode::Exhaustive => {
            let runs = factorial(options.len()).saturating_mul(economy.num_students() as u128);
            Budget::check("strategy-proofness run", runs, budget.runs)?;
            let reports: Vec<Vec<Choice>> = options.iter().copied().permutations(options.len()).collect();
            (
                economy
                    .all_students()
                    .flat_map(|s| reports.iter().map(move |r| (s, r.clone())))
                    .collect(),
                None,
            )
        }
        SearchMode::Sampled { samples, seed } => {
            Budget::check("strategy-proofness run", u128::from(samples), budget.runs)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = economy.num_students();
            let drawn = (0..samples)
                .map(|_| {
                    let s = Student(rng.gen_range(0..n.max(1)));
                    let mut r = options.clone();
                    r.shuffle(&mut rng);
                    (s, r)
                })
                .filter(|_| n > 0)
                .collect();
            (drawn, Some(seed))
        }
    };

    let found = candidates
        .par_iter()
        .map(|(s, ranking)| -> Result<Option<Witness>> {
            let report = Preference::new(economy, ranking.clone())?;
            let got = mechanism.outcome(&prefs.with_replaced(*s, report.clone()))?;
            let pref = prefs.get(*s);
            Ok(pref
                .prefers(got.get(*s), truthful.get(*s))
                .then(|| Witness::Misreport {
                    student: *s,
                    report,
                    truthful: truthful.get(*s),
                    outcome: got.get(*s),
                }))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    let witness = match found {
        None => None,
        Some(r) => r?,
    };
    let mut report = VerificationReport::new(
        Property::StrategyProofness,
        witness,
        candidates.len() as u64,
    );
    report.seed = seed;
    Ok(report)
}
