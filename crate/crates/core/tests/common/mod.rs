#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::PathBuf;

use distmatch::instance::{load_instance, Instance};
use distmatch::model::{enumerate_feasible, Budget, Distribution, Economy, Preference, Profile};
use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    load_instance(&text, &Budget::default()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn report(criterion: u32, passed: bool, detail: &str) {
    println!(
        "criterion {criterion:>2}: {} {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
}

/// Shape `(schools, types)` with at most `max_cells` cells.
pub fn random_shape<R: Rng>(rng: &mut R, max_cells: usize) -> (usize, usize) {
    loop {
        let c = rng.gen_range(1..=max_cells);
        let t = rng.gen_range(1..=max_cells);
        if c * t <= max_cells {
            return (c, t);
        }
    }
}

/// An economy without students (enough for anything that only needs the
/// feasible set); optionally split into districts.
pub fn bare_economy<R: Rng>(rng: &mut R, schools: usize, types: usize, max_cap: u32, districts: bool) -> Economy {
    let mut b = Economy::builder().types((0..types).map(|t| format!("t{t}")));
    let n_d = if districts { rng.gen_range(1..=schools) } else { 0 };
    for c in 0..schools {
        let cap = rng.gen_range(0..=max_cap);
        b = if districts {
            let d = if c < n_d { c } else { rng.gen_range(0..n_d) };
            b.school_in(format!("c{c}"), cap, format!("d{d}"))
        } else {
            b.school(format!("c{c}"), cap)
        };
    }
    b.build().unwrap()
}

/// Full random market for mechanism tests.
pub struct Market {
    pub economy: Economy,
    pub prefs: Profile,
}

pub fn random_market<R: Rng>(
    rng: &mut R,
    max_students: usize,
    max_schools: usize,
    max_types: usize,
    max_total_capacity: u32,
    districts: bool,
) -> Market {
    let schools = rng.gen_range(1..=max_schools);
    let types = rng.gen_range(1..=max_types);
    let students = rng.gen_range(1..=max_students);
    let mut caps = vec![1u32; schools];
    let mut total = schools as u32;
    while total < max_total_capacity && rng.gen_bool(0.6) {
        caps[rng.gen_range(0..schools)] += 1;
        total += 1;
    }
    let n_d = if districts { rng.gen_range(1..=schools) } else { 0 };
    let mut b = Economy::builder().types((0..types).map(|t| format!("t{t}")));
    for (c, &q) in caps.iter().enumerate() {
        b = if districts {
            let d = if c < n_d { c } else { rng.gen_range(0..n_d) };
            b.school_in(format!("c{c}"), q, format!("d{d}"))
        } else {
            b.school(format!("c{c}"), q)
        };
    }
    let mut load = vec![0u32; schools];
    let names: Vec<String> = (0..schools).map(|c| format!("c{c}")).collect();
    for s in 0..students {
        let t = format!("t{}", rng.gen_range(0..types));
        let open: Vec<usize> = (0..schools).filter(|&c| load[c] < caps[c]).collect();
        let init = if !open.is_empty() && rng.gen_bool(0.7) {
            let c = *open.choose(rng).unwrap();
            load[c] += 1;
            Some(names[c].as_str())
        } else {
            None
        };
        b = b.student(format!("s{s}"), t, init);
    }
    let economy = b.build().unwrap();
    let prefs = random_profile(rng, &economy);
    Market { economy, prefs }
}

pub fn random_preference<R: Rng>(rng: &mut R, economy: &Economy) -> Preference {
    let mut r: Vec<Option<distmatch::model::School>> =
        std::iter::once(None).chain(economy.all_schools().map(Some)).collect();
    r.shuffle(rng);
    Preference::new(economy, r).unwrap()
}

pub fn random_profile<R: Rng>(rng: &mut R, economy: &Economy) -> Profile {
    let prefs = economy.all_students().map(|_| random_preference(rng, economy)).collect();
    Profile::new(economy, prefs).unwrap()
}

pub fn feasible(economy: &Economy) -> Vec<Distribution> {
    enumerate_feasible(economy, &Budget::default()).unwrap()
}

/// Random non-empty subset; mixes sparse subsets with boxes so both
/// verdicts show up.
pub fn random_subset<R: Rng>(rng: &mut R, all: &[Distribution]) -> Vec<Distribution> {
    let out: Vec<Distribution> = match rng.gen_range(0..3) {
        0 => {
            let p = rng.gen_range(0.1..0.9);
            all.iter().filter(|_| rng.gen_bool(p)).cloned().collect()
        }
        1 => {
            let dim = all[0].counts().len();
            let lo: Vec<u32> = (0..dim).map(|_| rng.gen_range(0..=1)).collect();
            let hi: Vec<u32> = lo.iter().map(|&l| l + rng.gen_range(0..=2)).collect();
            all.iter()
                .filter(|d| d.counts().iter().zip(&lo).zip(&hi).all(|((v, l), h)| l <= v && v <= h))
                .cloned()
                .collect()
        }
        _ => {
            let k = rng.gen_range(1..=3.min(all.len()));
            all.choose_multiple(rng, k).cloned().collect()
        }
    };
    if out.is_empty() {
        vec![all.choose(rng).unwrap().clone()]
    } else {
        out
    }
}

pub fn random_table<R: Rng>(rng: &mut R, all: &[Distribution], levels: i64) -> BTreeMap<Distribution, Rational64> {
    all.iter()
        .map(|d| (d.clone(), Rational64::from_integer(rng.gen_range(0..levels))))
        .collect()
}

/// Direct transcription of the exchange property over signed vectors.
/// `score` is `None` outside the domain; `natural` admits the null move.
pub fn naive_exchange_holds(
    domain: &[Vec<i64>],
    score: &dyn Fn(&[i64]) -> Option<i64>,
    natural: bool,
) -> bool {
    naive_first_violation(domain, score, natural).is_none()
}

pub fn naive_first_violation(
    domain: &[Vec<i64>],
    score: &dyn Fn(&[i64]) -> Option<i64>,
    natural: bool,
) -> Option<(Vec<i64>, Vec<i64>, usize)> {
    for x in domain {
        for y in domain {
            for i in 0..x.len() {
                if x[i] > y[i] && !naive_pivot_ok(x, y, i, score, natural) {
                    return Some((x.clone(), y.clone(), i));
                }
            }
        }
    }
    None
}

pub fn naive_pivot_ok(
    x: &[i64],
    y: &[i64],
    i: usize,
    score: &dyn Fn(&[i64]) -> Option<i64>,
    natural: bool,
) -> bool {
    let need = score(x).unwrap().min(score(y).unwrap());
    let mut js: Vec<Option<usize>> = (0..x.len()).filter(|&j| x[j] < y[j]).map(Some).collect();
    if natural {
        js.push(None);
    }
    js.into_iter().any(|j| {
        let mut a = x.to_vec();
        let mut b = y.to_vec();
        a[i] -= 1;
        b[i] += 1;
        if let Some(j) = j {
            a[j] += 1;
            b[j] -= 1;
        }
        match (score(&a), score(&b)) {
            (Some(sa), Some(sb)) => sa.min(sb) >= need,
            _ => false,
        }
    })
}

pub fn signed(points: impl IntoIterator<Item = Vec<u32>>) -> Vec<Vec<i64>> {
    points
        .into_iter()
        .map(|p| p.into_iter().map(i64::from).collect())
        .collect()
}

/// Naive M♮/M-convexity of a point set.
pub fn naive_set_convex(points: &[Vec<u32>], natural: bool) -> bool {
    let dom = signed(points.iter().cloned());
    let members: HashSet<Vec<i64>> = dom.iter().cloned().collect();
    let score = move |p: &[i64]| members.contains(p).then_some(1);
    naive_exchange_holds(&dom, &score, natural)
}

/// Naive pseudo M♮/M-concavity of a table keyed by flat counts. Values are
/// integers scaled by the common denominator, so comparisons stay exact.
pub fn naive_function_concave(values: &HashMap<Vec<u32>, Rational64>, natural: bool) -> bool {
    let lcm = values.values().fold(1i64, |acc, v| num_integer_lcm(acc, *v.denom()));
    let scaled: HashMap<Vec<i64>, i64> = values
        .iter()
        .map(|(k, v)| (k.iter().map(|&x| i64::from(x)).collect(), (v * lcm).to_integer()))
        .collect();
    let dom: Vec<Vec<i64>> = scaled.keys().cloned().collect();
    let score = move |p: &[i64]| scaled.get(p).copied();
    naive_exchange_holds(&dom, &score, natural)
}

fn num_integer_lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}
