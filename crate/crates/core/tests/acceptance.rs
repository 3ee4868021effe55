//! Acceptance run: one PASS/FAIL line per criterion, each within its time
//! limit. Exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ryserlab::catalog::catalog_list;
use ryserlab::cli;
use ryserlab::complementation::{complement, type1_witness, verify_complement_properties, Status};
use ryserlab::design::{classify, DesignClass, IncidenceStructure};
use ryserlab::feasibility::{enumerate_tuples, replication_identity_parity, scan_report, ParameterTuple, Verdict};
use ryserlab::invariants::{ryser_invariants, type1_product_test, type1_test, verify_design, GapCase};
use ryserlab::search::{search_designs, search_type2, SearchSpec, Status as SearchStatus};
use ryserlab::Execution;

use common::{brute_force_keys, catalog_ryser, near_pencils};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn catalog_sweep() -> Outcome {
    let mut checked = 0;
    for e in catalog_list().into_iter().filter(|e| e.complementable) {
        for i in 0..e.v {
            let d = complement(&e.design, i).map_err(|err| format!("{} block {i}: {err}", e.name))?;
            let expect = DesignClass::Ryser { v: e.v, lambda: e.k - e.lambda };
            ensure(classify(&d) == expect, || format!("{} block {i}: {}", e.name, classify(&d)))?;
            let rep = verify_design(&d);
            ensure(rep.overall_pass(), || {
                let f: Vec<String> = rep.failures().map(|c| c.label()).collect();
                format!("{} block {i}: failures {}", e.name, f.join(","))
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} complemented designs verified"))
}

fn involution_sweep() -> Outcome {
    let mut pairs = 0;
    for (name, i, d) in catalog_ryser() {
        for a in 0..d.v() {
            let back = complement(&complement(&d, a).unwrap(), a).unwrap();
            ensure(back == d, || format!("{name}*{i}: involution fails at block {a}"))?;
            for b in (0..d.v()).filter(|&b| b != a) {
                let rep = verify_complement_properties(&d, a, b).map_err(|e| e.to_string())?;
                let bad: Vec<&str> = rep.items.iter().filter(|r| r.status != Status::Holds).map(|r| r.item.roman()).collect();
                ensure(bad.is_empty(), || format!("{name}*{i} A={a} B={b}: items {}", bad.join(",")))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} (A,B) pairs, all seven items hold"))
}

fn generated_instances() -> Vec<IncidenceStructure> {
    let mut all: Vec<IncidenceStructure> = catalog_ryser().into_iter().map(|(_, _, d)| d).collect();
    all.extend(near_pencils());
    for lambda in [2, 3] {
        let rep = search_type2(lambda, 13, Execution::Parallel).unwrap();
        for (_, r) in rep.runs {
            all.extend(r.solutions.into_iter().map(|s| s.design));
        }
    }
    all
}

fn type1_agreement() -> Outcome {
    let instances = generated_instances();
    for (n, d) in instances.iter().enumerate() {
        let inv = ryser_invariants(d).map_err(|e| format!("instance {n}: {e}"))?;
        let gap = type1_test(&inv);
        let product = type1_product_test(&inv);
        let witness = type1_witness(d).map_err(|e| e.to_string())?.is_some();
        ensure(gap == product && product == witness, || {
            format!("instance {n}: D test {gap}, product test {product}, witness {witness}")
        })?;
        let by_gap = GapCase::from_gap(inv.gap);
        let by_products = GapCase::from_products(inv.lambda, inv.x * inv.d, inv.y * inv.c);
        ensure(Some(by_gap) == by_products, || format!("instance {n}: case {by_gap:?} vs {by_products:?}"))?;
    }
    Ok(format!("{} instances agree on all three tests and the case table", instances.len()))
}

fn scanner_vs_instances() -> Outcome {
    let instances = generated_instances();
    let mut matched = 0;
    for lambda in [2i64, 3, 4] {
        let tuples = enumerate_tuples(lambda, false, Execution::Parallel).map_err(|e| e.to_string())?;
        for d in &instances {
            let inv = ryser_invariants(d).unwrap();
            if inv.lambda != lambda {
                continue;
            }
            let t = ParameterTuple::from_invariants(&inv);
            ensure(tuples.contains(&t), || format!("tuple missing from enumeration: {t}"))?;
            matched += 1;
        }
    }
    ensure(matched > 0, || "no instances with lambda in 2..=4".into())?;
    let rep = scan_report(2, 8, false, Execution::Parallel).map_err(|e| e.to_string())?;
    let open = rep.open().count();
    ensure(open == 0, || format!("scan(2,8) left {open} Open tuples"))?;
    Ok(format!("{matched} instance tuples found verbatim; scan(2,8) has 0 Open"))
}

fn power_of_two_rule() -> Outcome {
    let mut evaluations = 0u64;
    for n in 1..=10u32 {
        let v = (1i64 << n) + 1;
        for m in 1..n {
            let g = 1i64 << m;
            let s = 1i64 << (n - m); // c + d
            for d in 1..s {
                let c = s - d;
                if c <= d || num_integer::gcd(c, d) != 1 {
                    continue;
                }
                for lambda in 2..=16 {
                    for e1 in 1..v {
                        let (lhs, rhs) = replication_identity_parity(lambda, c, d, g, e1, v - e1);
                        ensure(lhs != rhs, || format!("parity agrees at v={v} g={g} c={c} d={d} lambda={lambda} e1={e1}"))?;
                        evaluations += 1;
                    }
                }
            }
        }
    }
    let rep = scan_report(2, 24, true, Execution::Parallel).map_err(|e| e.to_string())?;
    let survivors: Vec<String> = rep
        .rows
        .iter()
        .filter(|(t, verdict)| *verdict == Verdict::Open && (t.v - 1).count_ones() == 1)
        .map(|(t, _)| t.to_string())
        .collect();
    ensure(survivors.is_empty(), || format!("Open with v-1 a power of two: {}", survivors.join("; ")))?;
    Ok(format!("{evaluations} parity evaluations contradict; no Open tuple at v = 2^n + 1 for lambda 2..=24"))
}

fn exhaustive_search() -> Outcome {
    for (lambda, c, d, g) in [(2, 2, 1, 2), (3, 3, 2, 2)] {
        let t = ParameterTuple::from_core(lambda, c, d, g).unwrap();
        let r = search_designs(&SearchSpec::new(t.clone()), Execution::Parallel).map_err(|e| e.to_string())?;
        ensure(r.status == SearchStatus::Complete && !r.solutions.is_empty(), || format!("v={}: no complete nonempty result", t.v))?;
        for s in &r.solutions {
            ensure(verify_design(&s.design).overall_pass() && s.type1, || format!("v={}: solution fails verify or is not Type-1", t.v))?;
        }
    }
    let mut oracle_tuples = 0;
    for lambda in 2..=3 {
        for t in enumerate_tuples(lambda, false, Execution::Sequential).unwrap().into_iter().filter(|t| t.v <= 8) {
            let r = search_designs(&SearchSpec::new(t.clone()), Execution::Parallel).unwrap();
            let found: std::collections::BTreeSet<Vec<u32>> = r.solutions.iter().map(|s| s.key.clone()).collect();
            ensure(found == brute_force_keys(&t), || format!("oracle mismatch at {t}"))?;
            oracle_tuples += 1;
        }
    }
    ensure(oracle_tuples > 0, || "no tuple with v <= 8".into())?;
    let mut searched = 0;
    for lambda in 2..=3 {
        let rep = search_type2(lambda, 13, Execution::Parallel).map_err(|e| e.to_string())?;
        ensure(rep.complete(), || format!("lambda={lambda}: incomplete"))?;
        ensure(rep.type2_findings().is_empty(), || format!("lambda={lambda}: Type-2 design found"))?;
        for (_, r) in &rep.runs {
            for s in &r.solutions {
                ensure(verify_design(&s.design).overall_pass(), || format!("unsound solution at {}", r.tuple))?;
            }
        }
        searched += rep.runs.len();
    }
    Ok(format!("v=7 and v=11 nonempty and Type-1; oracle agrees on {oracle_tuples} tuple(s); {searched} tuples searched, 0 Type-2"))
}

fn cli_run(args: &[&str]) -> (u8, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ryserlab").chain(args.iter().copied());
    let code = cli::run(argv, &mut std::io::empty(), &mut out, &mut err);
    (code, out)
}

fn determinism() -> Outcome {
    let commands: [&[&str]; 4] = [
        &["scan", "--lambda-min", "2", "--lambda-max", "12"],
        &["search", "--lambda", "3", "--v", "13"],
        &["search", "--lambda", "3", "--v-cap", "13"],
        &["search", "--lambda", "2", "--v-cap", "13"],
    ];
    for cmd in commands {
        let mut outputs = Vec::new();
        for jobs in ["1", "4", "1", "4"] {
            let mut args = cmd.to_vec();
            args.extend(["--jobs", jobs]);
            let (code, out) = cli_run(&args);
            ensure(code == 0, || format!("{} exited {code}", cmd.join(" ")))?;
            outputs.push(out);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{} differs between runs", cmd.join(" ")))?;
    }
    Ok("scan and search reports byte-identical for --jobs 1/4, repeated".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("catalog sweep", Duration::from_secs(10), catalog_sweep),
        ("involution sweep", Duration::from_secs(10), involution_sweep),
        ("type-1 triple agreement", Duration::from_secs(10), type1_agreement),
        ("scanner vs instances", Duration::from_secs(30), scanner_vs_instances),
        ("power-of-two rule", Duration::from_secs(30), power_of_two_rule),
        ("exhaustive search", Duration::from_secs(300), exhaustive_search),
        ("determinism", Duration::from_secs(300), determinism),
    ];
    let mut all_pass = true;
    for (n, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; over time limit")),
            Err(e) => (false, e),
        };
        all_pass &= ok;
        println!(
            "criterion {} {:<24} {}  {:.2}s/{}s  {}",
            n + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            detail
        );
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
