//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//!
//! Every criterion is exact; there are no numeric tolerances.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use invseq::extensions::{
    ascent_minimal_set, ascent_two_insertion_witnesses, construct_decreasing_ascent,
    is_minimal_in_family, Family,
};
use invseq::generate::families::{enumerate_inv, enumerate_patterns};
use invseq::generate::{
    isbt_table_with, minimal_set, minimal_set_naive, minimal_set_with, GenOptions, MinimalSet,
};
use invseq::minimality::{check_prop_sat, is_minimal_prop1};
use invseq::series::{
    b_residual, closed_t, count_table, solve_b, solve_t_iterative, t_residual, BivariateSeries,
    CountKind,
};
use invseq::trees::{
    coloured_to_minimal, count_a_enum, enumerate_a, ip_counts_by_max, minimal_to_coloured, phi,
    phi_coloured, phi_coloured_inverse, phi_inverse, ColouredInvSeq,
};
use invseq::{Execution, IntSeq};
use num_bigint::BigUint;

type Outcome = Result<String, String>;

fn s(text: &str) -> IntSeq {
    text.parse().unwrap()
}

fn seqs(list: &[&str]) -> Vec<IntSeq> {
    let mut v: Vec<IntSeq> = list.iter().map(|t| s(t)).collect();
    v.sort();
    v
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> String {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn csv_table(name: &str) -> Vec<Vec<u64>> {
    data(name)
        .lines()
        .skip(1)
        .map(|l| l.split(',').skip(1).map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn c1_minimal_sets() -> Outcome {
    let cases: [(&str, &[&str]); 3] = [
        ("10", &["010", "0021"]),
        ("0201", &["00201", "01201", "001312", "010312", "011302"]),
        ("021", &["0021", "0121"]),
    ];
    for (rho, want) in cases {
        let got = minimal_set(&s(rho)).map_err(|e| e.to_string())?;
        check(got.sequences == seqs(want), || format!("minimal {rho} = {:?}", got.sequences))?;
    }
    Ok("3 sets equal".into())
}

fn c2_isbt_spots() -> Outcome {
    let a = minimal_set(&s("0312")).unwrap();
    check(a.isbt == vec![6, 5, 0], || format!("ISBT(0312) = {:?}", a.isbt))?;
    let b = minimal_set(&s("013542")).unwrap();
    check(b.len() == 34, || format!("013542 has {} minimal sequences", b.len()))?;
    check(b.sequences.iter().all(|x| x.len() == 8), || "013542: a sequence not of length 8".into())?;
    Ok("ISBT(0312) = (6, 5, 0); 013542 gives 34 of length 8".into())
}

/// Patterns of length <= 5 with `ρ_1 = mdd(ρ) = c`.
fn rule_patterns(c: u32) -> BTreeSet<IntSeq> {
    (1..=5)
        .flat_map(|k| enumerate_patterns(k).unwrap())
        .filter(|p| p.at(1) == c && p.mdd().unwrap() == c)
        .collect()
}

fn c3_table3(sets: &[MinimalSet]) -> Outcome {
    let mut by_type: std::collections::BTreeMap<Vec<usize>, BTreeSet<IntSeq>> = Default::default();
    for m in sets {
        by_type.entry(m.isbt.clone()).or_default().insert(m.pattern.clone());
    }
    check(sets.len() == 633, || format!("{} patterns", sets.len()))?;
    check(by_type.len() == 27, || format!("{} basis types", by_type.len()))?;
    let mut rows = 0;
    for line in data("table3.txt").lines().filter(|l| !l.starts_with('#')) {
        let (vec_text, pats) = line.split_once('\t').unwrap();
        let isbt: Vec<usize> = vec_text
            .trim_matches(|c| c == '(' || c == ')')
            .split(", ")
            .map(|x| x.parse().unwrap())
            .collect();
        let want: BTreeSet<IntSeq> = match pats.strip_prefix("rule:") {
            Some(c) => rule_patterns(c.parse().unwrap()),
            None => pats.split(' ').map(s).collect(),
        };
        let got = by_type.get(&isbt).cloned().unwrap_or_default();
        check(got == want, || format!("row {vec_text}: got {got:?}"))?;
        rows += 1;
    }
    check(rows == 27, || format!("golden file has {rows} rows"))?;
    Ok("27 basis types over 633 patterns, all rows match".into())
}

fn c4_oracle_equivalence() -> Outcome {
    let mut n = 0;
    for k in 1..=4 {
        for rho in enumerate_patterns(k).unwrap() {
            let fast = minimal_set(&rho).map_err(|e| e.to_string())?;
            let slow = minimal_set_naive(&rho).map_err(|e| e.to_string())?;
            check(fast == slow, || format!("{rho}: pruned {:?} naive {:?}", fast.sequences, slow.sequences))?;
            n += 1;
        }
    }
    check(n == 92, || format!("{n} patterns"))?;
    Ok("92 patterns, pruned = naive".into())
}

fn c5_table1() -> Outcome {
    let golden = csv_table("table1.csv");
    let series = count_table(CountKind::A, 7).map_err(|e| e.to_string())?;
    for n in 0..=7 {
        for m in 0..=7 {
            let want = golden[n][m];
            let en = count_a_enum(n, m, Execution::Parallel).unwrap();
            check(en == want, || format!("enumerated |A_{n},{m}| = {en}, want {want}"))?;
            let se = series.get(n, m).unwrap();
            check(*se == BigUint::from(want), || format!("series |A_{n},{m}| = {se}"))?;
        }
    }
    let fact = |m: u64| (1..=m).product::<u64>();
    for m in 0..=7 {
        check(golden[m][m] == fact(m as u64), || format!("A_{m},{m} != {m}!"))?;
    }
    let diag: Vec<u64> = (0..=4).map(|m| count_a_enum(2 * m, m, Execution::Parallel).unwrap()).collect();
    check(diag == vec![1, 1, 4, 34, 496], || format!("A_(2m,m) = {diag:?}"))?;
    Ok("64 entries by enumeration and series; diagonals m! and 1,1,4,34,496".into())
}

fn c6_table4() -> Outcome {
    let golden = csv_table("table4.csv");
    let series = count_table(CountKind::T, 7).map_err(|e| e.to_string())?;
    let by_len: Vec<Vec<u64>> = (0..=11).map(|l| ip_counts_by_max(l).unwrap()).collect();
    for n in 1..=7 {
        for k in 1..=7 {
            let want = golden[n - 1][k - 1];
            let se = series.get(n, k).unwrap();
            check(*se == BigUint::from(want), || format!("series |T_{n},{k}| = {se}"))?;
            if n + k <= 12 {
                let en = by_len[n + k - 1][n - 1];
                check(en == want, || format!("enumerated |T_{n},{k}| = {en}"))?;
            }
        }
    }
    let anti: Vec<u64> = (1..=7)
        .map(|n| (0..n).map(|k| golden.get(k).and_then(|r| r.get(n - k - 1)).copied().unwrap()).sum())
        .collect();
    check(anti == vec![1, 2, 5, 16, 63, 294, 1585], || format!("antidiagonals {anti:?}"))?;
    let ip = count_table(CountKind::IP, 13).map_err(|e| e.to_string())?;
    let ip13 = &ip.counts[0][12];
    check(*ip13 == BigUint::from(363674407u32), || format!("|I_13 ∩ P_13| = {ip13}"))?;
    Ok("49 entries; antidiagonals 1..1585; |I_13 ∩ P_13| = 363674407".into())
}

fn c7_generating_functions() -> Outcome {
    let order = 14;
    let b = solve_b(order);
    check(b_residual(&b).is_zero_through(order - 1), || "B residual nonzero".into())?;
    let t = closed_t(order);
    check(t_residual(&t).is_zero_through(order - 1), || "T residual nonzero".into())?;
    for j in 0..=order {
        check(b.coeff(0, j) == Default::default() && t.coeff(0, j) == Default::default(), || {
            "nonzero x^0 coefficient".into()
        })?;
    }
    check(t == solve_t_iterative(order), || "closed T differs from iteration".into())?;
    // e^T · (e^x + e^y - e^{x+y}) = 1
    let x = BivariateSeries::x(order);
    let y = BivariateSeries::y(order);
    let inner = &(&x.exp().unwrap() + &y.exp().unwrap()) - &(&x + &y).exp().unwrap();
    let product = &t.exp().unwrap() * &inner;
    check(product == BivariateSeries::one(order), || "e^T (e^x + e^y - e^(x+y)) != 1".into())?;
    Ok(format!("residuals vanish through degree {}; closed form confirmed", order - 1))
}

fn c8_bijections() -> Outcome {
    for n in 0..=6 {
        for m in 0..=n {
            for a in enumerate_a(n, m).unwrap() {
                let t = phi_coloured(&a);
                check(t.is_b_tree(n + 1, m + 1), || format!("φ({a}) not in B"))?;
                check(phi_coloured_inverse(&t).unwrap() == a, || format!("φ round trip fails on {a}"))?;
            }
        }
    }
    for n in 0..=7 {
        for x in enumerate_inv(n).unwrap() {
            check(phi_inverse(&phi(&x).unwrap()).unwrap() == x, || format!("φ round trip fails on {x}"))?;
        }
    }
    let mut patterns = 0;
    for k in 1..=4 {
        for rho in enumerate_patterns(k).unwrap() {
            let m = rho.mdd().unwrap();
            if rho.at(1) != m {
                continue;
            }
            patterns += 1;
            let set = minimal_set(&rho).unwrap();
            let m = m as usize;
            for n in m..=2 * m {
                let mut images = Vec::new();
                for a in enumerate_a(n, m).unwrap() {
                    let sigma = coloured_to_minimal(&a, &rho).unwrap();
                    check(minimal_to_coloured(&sigma, &rho).unwrap() == a, || format!("{rho}: backward fails on {a}"))?;
                    images.push(sigma);
                }
                images.sort();
                let slice: Vec<IntSeq> = set.of_length(n + k).cloned().collect();
                check(images == slice, || format!("{rho}: images of A_{n},{m} differ from the minimal set"))?;
            }
        }
    }
    let alpha = ColouredInvSeq::new(s("002303"), &[0, 3]).unwrap();
    let sigma = coloured_to_minimal(&alpha, &s("4540312")).unwrap();
    check(sigma == s("0023036761524"), || format!("coloured prefix example gives {sigma}"))?;
    let fig = ColouredInvSeq::new(s("01131535"), &[1, 3]).unwrap();
    let t = phi_coloured(&fig);
    let kids = [t.children(0), t.children(1), t.children(3), t.children(5)];
    check(
        kids == [vec![1], vec![2, 3, 5], vec![4, 7], vec![6, 8]],
        || format!("tree example children {kids:?}"),
    )?;
    Ok(format!("φ on A_(n,m), n <= 6, and I_n, n <= 7; coloured prefix on {patterns} patterns; both figures"))
}

fn c9_invariants(sets: &[MinimalSet]) -> Outcome {
    let mut checked = 0usize;
    for set in sets {
        let rho = &set.pattern;
        let k = rho.len();
        let m = rho.mdd().unwrap() as usize;
        let lemma = k - rho.dist() + m;
        for sigma in &set.sequences {
            check(sigma.len() - sigma.dist() == lemma, || format!("{sigma}/{rho}: length - dist"))?;
            check(k + m <= sigma.len() && sigma.len() <= k + 2 * m && k + 2 * m <= 3 * k - 2, || {
                format!("{sigma}/{rho}: length bounds")
            })?;
            check(check_prop_sat(sigma, rho).unwrap(), || format!("{sigma}/{rho}: saturated-entry conditions"))?;
            check(is_minimal_prop1(sigma, rho).unwrap().minimal, || format!("{sigma}/{rho}: not minimal"))?;
            checked += 1;
        }
        let longest = set.sequences.iter().map(IntSeq::len).max().unwrap();
        check(longest + 1 >= k + 2 * m, || format!("{rho}: longest minimal sequence has length {longest}"))?;
    }
    Ok(format!("{checked} minimal sequences over {} patterns", sets.len()))
}

fn c10_extensions() -> Outcome {
    let a = ascent_minimal_set(&s("10"), 5).map_err(|e| e.to_string())?;
    check(a.sequences == vec![s("010")], || format!("ascent-minimal 10 = {:?}", a.sequences))?;
    let b = ascent_minimal_set(&s("210"), 12).map_err(|e| e.to_string())?;
    let n11 = b.of_length(11).count();
    let n12 = b.of_length(12).count();
    check(n11 > 0 && n12 == 0, || format!("210: {n11} of length 11, {n12} of length 12"))?;
    let c = construct_decreasing_ascent(4).unwrap();
    check(c.to_string() == "010134242378685756CBA9", || format!("construction gives {c}"))?;
    check(c.len() == 22, || "length".into())?;
    let w = is_minimal_in_family(&c, &s("3210"), Family::Ascent).unwrap();
    check(w.is_none(), || format!("construction not minimal, delete {w:?}"))?;

    // stretch, not gating: a length-13 minimal sequence for 210
    let seeds: Vec<IntSeq> = b.of_length(11).cloned().collect();
    let inserted = ascent_two_insertion_witnesses(&s("210"), &seeds, &b.sequences, Execution::Parallel)
        .map(|v| v.len())
        .unwrap_or(0);
    let stretch = match ascent_minimal_set(&s("210"), 13) {
        Ok(full) => match full.of_length(13).next() {
            Some(w) => format!("witness found, {w} ({} in all)", full.of_length(13).count()),
            None => "no witness".to_string(),
        },
        Err(e) => format!("not run, {e}"),
    };
    Ok(format!(
        "{{010}}; 210 has {n11} of length 11 and none of length 12; k=4 construction minimal; \
         stretch: length 13 for 210 {stretch}, {inserted} from two insertions"
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut failed = 0;
    let mut report = |id: u32, name: &str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {detail} ({secs:.1}s)")
            }
        }
    };
    report(1, "minimal sets", &c1_minimal_sets);
    report(2, "ISBT spot values", &c2_isbt_spots);

    let t = Instant::now();
    let (_, sets) = isbt_table_with(5, &GenOptions::default()).expect("isbt table");
    let table_secs = t.elapsed().as_secs_f64();
    report(3, "basis type table", &|| c3_table3(&sets).map(|d| format!("{d}, table built in {table_secs:.1}s")));
    report(4, "pruned vs naive", &c4_oracle_equivalence);
    report(5, "coloured sequence counts", &c5_table1);
    report(6, "bi-labelled tree counts", &c6_table4);
    report(7, "generating functions", &c7_generating_functions);
    report(8, "bijections", &c8_bijections);
    report(9, "structural invariants", &|| c9_invariants(&sets));
    report(10, "restricted families", &c10_extensions);

    // sequential mode must agree with the parallel run
    let rho = s("24013");
    let seq = minimal_set_with(&rho, &GenOptions::sequential()).unwrap();
    let par = minimal_set(&rho).unwrap();
    assert_eq!(seq, par);

    println!("{} failed, total {:.1}s", failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
