//! Acceptance criteria, one `[PASS]`/`[FAIL]` line each. Runs without the
//! test harness so the report always prints.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use relkit::fixpoint::{
    check_model_fixpoint_equivalence, is_model, lfp, lfp_from, EvaluatorKind, FixpointConfig,
    Stepper,
};
use relkit::parser::{parse_domain, parse_program, pretty_print};
use relkit::semantics::{Interpretation, Relation, Structure, Value};
use relkit::stdlib::load_example;
use relkit::transpile::{agree_with_fixpoint, execute, lower, render, ExecConfig, Outcome, Query};
use relkit::Program;

use common::{intersection, leq, random_case, rng, union, SYNTAX};

const NEWTON_ERROR: f64 = 1e-5;
const QUOTIENT_INPUT_A: &str = "1000000001.1";
const QUOTIENT_INPUT_B: i64 = 17;
const REMAINDER_TOLERANCE: f64 = 1e-3;
const MAX_DEPTH: usize = 28;
const THEOREM_CASES: u64 = 1000;
const MAX_UNIVERSE: usize = 6;
const RANDOM_PROGRAMS: u64 = 500;
const SHORT_BUDGET: Duration = Duration::from_secs(1);
const SORT_BUDGET: Duration = Duration::from_secs(30);
const LONG_BUDGET: Duration = Duration::from_secs(60);

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pack(name: &str) -> (relkit::stdlib::ExamplePack, Program, Structure) {
    let pack = load_example(name).unwrap();
    let p = pack.program().unwrap();
    let s = pack.structure(&p).unwrap();
    (pack, p, s)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn newton() -> Verdict {
    let start = Instant::now();
    let (_, p, s) = pack("newtonSqrt2");
    let cfg = FixpointConfig {
        max_iterations: 4,
        ..FixpointConfig::default()
    };
    let r = lfp(&p, &s, &cfg).map_err(|e| e.to_string())?;
    let got: BTreeSet<BigRational> = r
        .interpretation
        .relation("q")
        .unwrap()
        .iter()
        .map(|t| t[0].as_exact().unwrap())
        .collect();
    // x -> (x + 2/x) / 2 from 1, in exact arithmetic
    let mut x = rat(1, 1);
    let mut expected = BTreeSet::new();
    for _ in 0..4 {
        expected.insert(x.clone());
        x = (&x + rat(2, 1) / &x) / rat(2, 1);
    }
    let last = rat(577, 408);
    let err = (last.to_f64().unwrap() - 2f64.sqrt()).abs();
    let elapsed = start.elapsed();
    check(
        got == expected && expected.contains(&last) && err < NEWTON_ERROR && elapsed < SHORT_BUDGET,
        format!(
            "q = {{1, 3/2, 17/12, 577/408}} exact, |577/408 - sqrt 2| = {err:.2e}, {elapsed:.2?}"
        ),
    )
}

fn quotient() -> Verdict {
    let start = Instant::now();
    let (pack, p, s) = pack("deBruijn");
    let modes = pack.modes().unwrap().unwrap();
    let unit = lower(&p, &modes, &s).map_err(|e| e.to_string())?;
    let a_exact = rat(10_000_000_011, 10);
    let b = BigRational::from_integer(BigInt::from(QUOTIENT_INPUT_B));
    // floor division oracle
    let m_expected = (&a_exact / &b).floor().to_integer();
    let u_expected = &a_exact - BigRational::from_integer(m_expected.clone()) * &b;

    let mut details = Vec::new();
    let mut ok = true;
    for literals in ["exact", "float"] {
        let s = if literals == "exact" {
            s.clone()
        } else {
            parse_domain("domain open float; literals float;", &p).map_err(|e| e.to_string())?
        };
        let a = relkit::parser::parse_value(QUOTIENT_INPUT_A, &s).map_err(|e| e.to_string())?;
        let run = execute(
            &unit,
            "q",
            &[a, Value::int(QUOTIENT_INPUT_B)],
            &s,
            ExecConfig::default(),
        )
        .map_err(|e| e.to_string())?;
        let Outcome::Success(outs) = run.outcome else {
            return Err(format!("q({QUOTIENT_INPUT_A}, {QUOTIENT_INPUT_B}) failed"));
        };
        let m_ok = outs[0].to_f64() == m_expected.to_f64();
        let u = outs[1].to_f64().unwrap();
        ok &= m_ok && (u - 8.1).abs() <= REMAINDER_TOLERANCE && run.max_depth <= MAX_DEPTH;
        details.push(format!(
            "{literals}: m={} u={u} depth={}",
            outs[0], run.max_depth
        ));
    }
    ok &= m_expected == BigInt::from(58_823_529)
        && (u_expected.to_f64().unwrap() - 8.1).abs() <= REMAINDER_TOLERANCE;
    let exec_time = start.elapsed();

    let queries: Vec<Query> = (0..=40)
        .flat_map(|a| {
            (1..=6).map(move |b| Query {
                pred: "q".into(),
                inputs: vec![Value::int(a), Value::int(b)],
            })
        })
        .collect();
    let report = agree_with_fixpoint(&p, &modes, &s, &Interpretation::default(), &queries)
        .map_err(|e| e.to_string())?;
    // and the fixpoint itself matches integer division
    let fix = lfp(&p, &s, &FixpointConfig::default())
        .map_err(|e| e.to_string())?
        .interpretation;
    let division_ok = (0..=40i64).all(|a| {
        (1..=6i64).all(|b| {
            fix.contains(
                "q",
                &[
                    Value::int(a),
                    Value::int(b),
                    Value::int(a / b),
                    Value::int(a % b),
                ],
            )
        })
    });
    ok &= report.agrees()
        && report.successes == queries.len()
        && division_ok
        && exec_time < SHORT_BUDGET;
    details.push(format!(
        "IR vs fixpoint {}/{} on a<=40, 1<=b<=6, run {exec_time:.2?}",
        report.successes,
        queries.len()
    ));
    check(ok, details.join("; "))
}

fn theorems() -> Verdict {
    let start = Instant::now();
    let mut failures = [0usize; 5];
    for seed in 0..THEOREM_CASES {
        let mut r = rng(seed);
        let case = random_case(&mut r, MAX_UNIVERSE);
        let a = case.random_db(&mut r, 0.3);
        let b = case.random_db(&mut r, 0.3);
        let stepper = Stepper::new(&case.program, &case.structure, EvaluatorKind::Binding).unwrap();
        let step = |db: &common::Db| case.db_of(&stepper.step(&case.to_interp(db)).unwrap());

        // (a) monotone
        if !leq(&step(&a), &step(&union(&a, &b))) {
            failures[0] += 1;
        }
        // (b) model iff step below, (c) model iff body inside head
        let (ma, mb) = (case.close(&a), case.close(&b));
        for db in [&a, &ma] {
            let i = case.to_interp(db);
            let by_step = leq(&step(db), db);
            match check_model_fixpoint_equivalence(&case.program, &i, &case.structure) {
                Ok(v) if v == by_step && v == case.is_model(db) => {}
                _ => failures[1] += 1,
            }
            if is_model(&case.program, &i, &case.structure).unwrap().holds != case.is_model(db) {
                failures[2] += 1;
            }
        }
        // (d) intersection of models
        let both = intersection(&ma, &mb);
        let both_i =
            Interpretation::intersect([&case.to_interp(&ma), &case.to_interp(&mb)]).unwrap();
        if case.db_of(&both_i) != both
            || !is_model(&case.program, &both_i, &case.structure)
                .unwrap()
                .holds
        {
            failures[3] += 1;
        }
        // (e) least fixpoint below models with the same data
        let fix = lfp_from(
            &case.program,
            &case.structure,
            &case.to_interp(&a),
            &FixpointConfig::default(),
        )
        .unwrap();
        let least = case.db_of(&fix.interpretation);
        if !fix.reached_fixpoint() || least != case.lfp(&a) || !leq(&least, &ma) {
            failures[4] += 1;
        }
    }
    let elapsed = start.elapsed();
    let names = [
        "monotone",
        "model<=>step",
        "model<=>body",
        "intersection",
        "minimality",
    ];
    let summary: Vec<String> = names
        .iter()
        .zip(failures)
        .map(|(n, f)| format!("{n} {}/{THEOREM_CASES}", THEOREM_CASES as usize - f))
        .collect();
    check(
        failures.iter().all(|&f| f == 0) && elapsed < LONG_BUDGET,
        format!("{}, |D|<={MAX_UNIVERSE}, {elapsed:.2?}", summary.join(", ")),
    )
}

fn steps_agree(p: &Program, s: &Structure, i: &Interpretation) -> Result<bool, String> {
    let naive = Stepper::new(p, s, EvaluatorKind::Naive).map_err(|e| e.to_string())?;
    let binding = Stepper::new(p, s, EvaluatorKind::Binding).map_err(|e| e.to_string())?;
    let mut cur = i.clone();
    for _ in 0..100 {
        let a = naive.step(&cur).map_err(|e| e.to_string())?;
        let b = binding.step(&cur).map_err(|e| e.to_string())?;
        if a != b {
            return Ok(false);
        }
        if a == cur {
            return Ok(true);
        }
        cur = a;
    }
    Ok(true)
}

fn evaluators() -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    let small = |name: &str, dom: &str| -> Result<(Program, Structure), String> {
        let (_, p, _) = pack(name);
        let s = parse_domain(dom, &p).map_err(|e| e.to_string())?;
        Ok((p, s))
    };
    let (_, p, s) = pack("evenOdd");
    let mut packs = vec![("evenOdd", p, s)];
    for (name, dom) in [
        (
            "sortSpec",
            "domain finite; values a, b; lists of a, b up to 3;",
        ),
        (
            "sortMerge",
            "domain finite; values a, b; lists of a, b up to 2;",
        ),
        ("deBruijn", "domain finite; values 0..9;"),
    ] {
        let (p, s) = small(name, dom)?;
        packs.push((name, p, s));
    }
    for (_, p, s) in &packs {
        ok &= steps_agree(p, s, &Interpretation::bottom(p, s))?;
    }
    let mut random_ok = 0;
    for seed in 0..RANDOM_PROGRAMS {
        let mut r = rng(1_000_000 + seed);
        let case = random_case(&mut r, MAX_UNIVERSE);
        let db = case.random_db(&mut r, 0.3);
        let from_random = steps_agree(&case.program, &case.structure, &case.to_interp(&db))?;
        let mut data = case.random_db(&mut r, 0.0);
        data.insert(common::DATA.0.into(), db[common::DATA.0].clone());
        if from_random && steps_agree(&case.program, &case.structure, &case.to_interp(&data))? {
            random_ok += 1;
        }
    }
    ok &= random_ok == RANDOM_PROGRAMS;
    let elapsed = start.elapsed();
    check(
        ok && elapsed < LONG_BUDGET,
        format!(
            "{} example programs, {random_ok}/{RANDOM_PROGRAMS} random programs, tuple-exact, {elapsed:.2?}",
            packs.len()
        ),
    )
}

fn sorted_lists() -> Vec<(Value, Value)> {
    let mut lists = vec![vec![]];
    let mut layer: Vec<Vec<&str>> = vec![vec![]];
    for _ in 0..4 {
        layer = layer
            .iter()
            .flat_map(|l| {
                ["a", "b"].map(|c| {
                    let mut m = l.clone();
                    m.push(c);
                    m
                })
            })
            .collect();
        lists.extend(layer.clone());
    }
    let value =
        |l: &[&str]| Value::cons_list(&l.iter().map(|c| Value::atom(c)).collect::<Vec<_>>());
    lists
        .into_iter()
        .map(|l| {
            let mut s = l.clone();
            s.sort_unstable();
            (value(&l), value(&s))
        })
        .collect()
}

fn sorting() -> Verdict {
    let start = Instant::now();
    let (_, spec, s1) = pack("sortSpec");
    let (_, merge, s2) = pack("sortMerge");
    let a = lfp(&spec, &s1, &FixpointConfig::default()).map_err(|e| e.to_string())?;
    let b = lfp(&merge, &s2, &FixpointConfig::default()).map_err(|e| e.to_string())?;
    let (ra, rb) = (
        a.interpretation.relation("sort").unwrap(),
        b.interpretation.relation("sort").unwrap(),
    );
    let oracle = sorted_lists();
    let answered = oracle
        .iter()
        .filter(|(l, sorted)| {
            let outs: Vec<&Value> = rb.iter().filter(|t| &t[0] == l).map(|t| &t[1]).collect();
            outs == [sorted]
        })
        .count();
    let oracle_rel: Relation = oracle
        .iter()
        .map(|(l, s)| vec![l.clone(), s.clone()])
        .collect();
    let elapsed = start.elapsed();
    check(
        a.reached_fixpoint() && b.reached_fixpoint() && ra == rb && ra == &oracle_rel && answered == oracle.len()
            && elapsed < SORT_BUDGET,
        format!(
            "merge sort = specification on {} lists of length <= 4 over {{a, b}}; {answered}/{} queries sorted; {elapsed:.2?}",
            ra.len(),
            oracle.len()
        ),
    )
}

fn parity() -> Verdict {
    let start = Instant::now();
    let (_, p, s) = pack("evenOdd");
    let r = lfp(&p, &s, &FixpointConfig::default()).map_err(|e| e.to_string())?;
    let rel = |q: &str| -> BTreeSet<i64> {
        r.interpretation
            .relation(q)
            .unwrap()
            .iter()
            .map(|t| t[0].as_int().unwrap().try_into().unwrap())
            .collect()
    };
    let (even, odd) = (rel("even"), rel("odd"));
    let elapsed = start.elapsed();
    check(
        r.reached_fixpoint()
            && even == (0..=20).filter(|n| n % 2 == 0).collect()
            && odd == (0..=20).filter(|n| n % 2 == 1).collect()
            && elapsed < SHORT_BUDGET,
        format!(
            "even {} tuples, odd {} tuples, {} in {} rounds, {elapsed:.2?}",
            even.len(),
            odd.len(),
            r.status,
            r.iterations
        ),
    )
}

fn golden() -> Verdict {
    let (pack, p, s) = pack("deBruijn");
    let modes = pack.modes().unwrap().unwrap();
    let text = render(&lower(&p, &modes, &s).map_err(|e| e.to_string())?);
    let golden_ok = text == pack.golden_text.unwrap();
    let round_trips = (0..THEOREM_CASES)
        .filter(|&seed| {
            let prog = SYNTAX.program(&mut rng(seed));
            let printed = pretty_print(&prog);
            parse_program(&printed).is_ok_and(|back| back == prog)
        })
        .count();
    check(
        golden_ok && round_trips == THEOREM_CASES as usize,
        format!(
            "rendering {} golden file byte-for-byte; round trip {round_trips}/{THEOREM_CASES}",
            if golden_ok { "matches" } else { "differs from" }
        ),
    )
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("square root iteration over exact rationals", newton),
        ("quotient by doubling, transpiled and executed", quotient),
        ("fixpoint and model theorems on random programs", theorems),
        ("naive and binding steps agree", evaluators),
        ("merge sort agrees with the sorting specification", sorting),
        ("even/odd least fixpoint", parity),
        ("golden transpilation and parser round trip", golden),
    ];
    let mut failed = 0;
    for (n, (title, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("[PASS] AC{} {title}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] AC{} {title}: {detail}", n + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
