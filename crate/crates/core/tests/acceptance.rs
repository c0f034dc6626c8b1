//! Acceptance gate. Prints one PASS/FAIL line per criterion.
//!
//! Opt-in members (degrees 243..648 and H_343) run with `--include-ignored`
//! or `SOLVLEN_FULL=1`. Criterion 4 fails at G_9 and is the only failure
//! the run tolerates; any other failure exits nonzero.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use solvlen::analytics::{
    ceiling_identity, cn_coarse_bounds, cs_prefix, delta_constants, derived_quotient_orders,
    g_lower_bound, printed_quotient_orders, upper_bound_optimum, x_n, BETA_REFERENCE,
    C_S_REFERENCE, X_N_COEFFICIENTS,
};
use solvlen::constructors::{named_group, symmetric_group, unitriangular, NamedGroup};
use solvlen::families::{check_k_subgroup, family_report, FamilyLabel, GroupReport};
use solvlen::series::{derived_length, derived_series, maximal_index2_subgroups};
use solvlen::{factorize, iterated_wreath, wreath, Factorization, PermutationGroup};

const EXPECTED_FAILURES: [u32; 1] = [4];

struct Outcome {
    id: u32,
    title: &'static str,
    problems: Vec<String>,
    elapsed: Duration,
}

fn run(id: u32, title: &'static str, f: impl FnOnce(&mut Vec<String>)) -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    f(&mut problems);
    Outcome {
        id,
        title,
        problems,
        elapsed: start.elapsed(),
    }
}

fn expect(problems: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        problems.push(what());
    }
}

fn within(problems: &mut Vec<String>, start: Instant, limit: Duration, what: &str) {
    let t = start.elapsed();
    expect(problems, t < limit, || {
        format!("{what} took {t:?}, limit {limit:?}")
    });
}

fn check_member(problems: &mut Vec<String>, rep: &GroupReport, d: u64, c: u64) {
    expect(problems, rep.d == d && rep.c == c, || {
        format!(
            "{}: (d, c) = ({}, {}), expected ({d}, {c})",
            rep.name, rep.d, rep.c
        )
    });
}

fn report(label: FamilyLabel, r: u32) -> GroupReport {
    family_report(label, r).expect("family member builds")
}

fn pow(base: u64, e: u64) -> Factorization {
    factorize(&BigUint::from(base)).unwrap().pow(e)
}

fn table_r1(p: &mut Vec<String>) -> Vec<GroupReport> {
    let start = Instant::now();
    let rows = [
        (FamilyLabel::Gm, 5, 7),
        (FamilyLabel::G2m, 6, 16),
        (FamilyLabel::G3m, 7, 25),
        (FamilyLabel::G4m, 8, 43),
        (FamilyLabel::G8m, 9, 52),
    ];
    let mut out = Vec::new();
    for (label, d, c) in rows {
        let rep = report(label, 1);
        check_member(p, &rep, d, c);
        out.push(rep);
    }
    expect(p, out[0].order == pow(2, 4).mul(&pow(3, 3)), || {
        format!("|G_9| = {}", out[0].order)
    });
    within(p, start, Duration::from_secs(60), "r = 1 table");
    out
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let full = args
        .iter()
        .any(|a| a == "--include-ignored" || a == "--ignored")
        || std::env::var_os("SOLVLEN_FULL").is_some();

    let mut g_members: Vec<GroupReport> = Vec::new();
    let mut outcomes = Vec::new();

    outcomes.push(run(1, "r = 1 table for the five G families", |p| {
        g_members.extend(table_r1(p));
    }));

    outcomes.push(run(
        2,
        "r = 2 spot checks (G_81, G_162; larger opt-in)",
        |p| {
            let start = Instant::now();
            let g81 = report(FamilyLabel::Gm, 2);
            check_member(p, &g81, 10, 70);
            expect(p, g81.order == pow(432, 10), || {
                format!("|G_81| = {}", g81.order)
            });
            let g162 = report(FamilyLabel::G2m, 2);
            check_member(p, &g162, 11, (15 * 81 - 7) / 8);
            within(p, start, Duration::from_secs(300), "G_81 and G_162");
            g_members.push(g81);
            g_members.push(g162);
            if full {
                let start = Instant::now();
                let rows = [
                    (FamilyLabel::G3m, 12, 23),
                    (FamilyLabel::G4m, 13, 39),
                    (FamilyLabel::G8m, 14, 47),
                ];
                for (label, d, k) in rows {
                    let rep = report(label, 2);
                    check_member(p, &rep, d, (k * 81 - 7) / 8);
                    g_members.push(rep);
                }
                within(p, start, Duration::from_secs(900), "degrees 243..648");
            }
        },
    ));

    outcomes.push(run(
        3,
        "odd-order families H_7, H_21, H_49 (H_343 opt-in)",
        |p| {
            let h7 = report(FamilyLabel::Hm, 1);
            check_member(p, &h7, 2, 2);
            expect(p, h7.order == pow(21, 1), || {
                format!("|H_7| = {}", h7.order)
            });
            check_member(p, &report(FamilyLabel::H3m, 1), 3, 9);
            let h49 = report(FamilyLabel::Hm, 2);
            check_member(p, &h49, 4, 16);
            expect(p, h49.order == pow(21, 8), || {
                format!("|H_49| = {}", h49.order)
            });
            if full {
                check_member(p, &report(FamilyLabel::Hm, 3), 6, 114);
            }
        },
    ));

    outcomes.push(run(
        4,
        "ceiling of 5 log_9 c - 2/3 equals d on the G members",
        |p| {
            for rep in &g_members {
                let ceil = ceiling_identity(rep.c);
                expect(p, ceil == rep.d, || {
                    format!(
                        "{}: 5 log_9 {} - 2/3 = {:.4}, ceiling {ceil}, d = {}",
                        rep.name,
                        rep.c,
                        g_lower_bound(rep.c),
                        rep.d
                    )
                });
            }
        },
    ));

    outcomes.push(run(
        5,
        "maximal subgroups of W_d lose a derived step, d = 1..5",
        |p| {
            let s2 = symmetric_group(2).unwrap();
            let start = Instant::now();
            for d in 1..=5usize {
                if d == 5 {
                    within(p, start, Duration::from_secs(30), "d <= 4");
                }
                let step = Instant::now();
                let w = iterated_wreath(&s2, d).unwrap();
                let subs = maximal_index2_subgroups(&w).unwrap();
                expect(p, subs.len() == (1 << d) - 1, || {
                    format!("W_{d}: {} maximal subgroups", subs.len())
                });
                for h in &subs {
                    let dh = derived_length(h).unwrap();
                    expect(p, dh < d, || {
                        format!("W_{d}: a maximal subgroup has d = {dh}")
                    });
                }
                if d == 5 {
                    within(p, step, Duration::from_secs(120), "d = 5");
                }
            }
        },
    ));

    outcomes.push(run(
        6,
        "Hall inequalities on W_d (d <= 5) and U_n(F_2) (n <= 9)",
        |p| {
            let s2 = symmetric_group(2).unwrap();
            for d in 1..=5 {
                for f in common::hall_failures(&iterated_wreath(&s2, d).unwrap()) {
                    p.push(format!("W_{d}: {f}"));
                }
            }
            for n in 2..=9 {
                for f in common::hall_failures(&unitriangular(2, n).unwrap()) {
                    p.push(format!("U_{n}(F_2): {f}"));
                }
            }
        },
    ));

    outcomes.push(run(7, "U_n order and derived length formulas", |p| {
        let start = Instant::now();
        for (q, max_n) in [(2u32, 9usize), (3, 6)] {
            for n in 2..=max_n {
                let u = unitriangular(q, n).unwrap();
                let order = BigUint::from(q).pow((n * (n - 1) / 2) as u32);
                let d = (usize::BITS - (n - 1).leading_zeros()) as usize;
                expect(p, u.order() == order, || {
                    format!("|U_{n}(F_{q})| = {}", u.order())
                });
                let got = derived_length(&u).unwrap();
                expect(p, got == d, || {
                    format!("d(U_{n}(F_{q})) = {got}, expected {d}")
                });
            }
        }
        within(p, start, Duration::from_secs(180), "unitriangular groups");
    }));

    outcomes.push(run(8, "K subgroups: index and derived length", |p| {
        let k18 = check_k_subgroup(1).unwrap();
        expect(p, k18.index == pow(2, 1), || {
            format!("|G_18 : K_18| = {}", k18.index)
        });
        expect(p, k18.d_k == 6 && k18.d_g == 6, || {
            format!("d(K_18) = {}, d(G_18) = {}", k18.d_k, k18.d_g)
        });
        let k162 = check_k_subgroup(2).unwrap();
        expect(p, k162.index == pow(2, 9), || {
            format!("|G_162 : K_162| = {}", k162.index)
        });
        expect(p, k162.d_k == 11, || format!("d(K_162) = {}", k162.d_k));
        // The printed 2^(m/18) is a flagged discrepancy, not a failure.
        if !k162.printed_matches() {
            println!(
                "  [8] flagged: printed index 2^(m/18) = 2^{} at m = 81; computed {}",
                k162.printed_log2_index, k162.index
            );
        }
    }));

    outcomes.push(run(
        9,
        "analytic constants, x_n column, and the optimum",
        |p| {
            let k = delta_constants();
            let near = |x: f64, t: f64, tol: f64| (x - t).abs() <= tol;
            expect(p, near(k.gamma, 1.5773, 0.001), || {
                format!("γ = {}", k.gamma)
            });
            expect(p, near(k.gamma0, 0.7124, 0.001), || {
                format!("γ0 = {}", k.gamma0)
            });
            expect(p, near(k.delta, 2.78, 0.01) && k.delta < 3.0, || {
                format!("δ = {}", k.delta)
            });
            expect(p, near(k.delta0, 1.67, 0.05) && k.delta0 < 2.0, || {
                format!("δ0 = {}", k.delta0)
            });
            for (kn, target) in X_N_COEFFICIENTS
                .into_iter()
                .zip([-0.97, 0.8, 1.7, 2.9, 3.4])
            {
                let x = x_n(kn).unwrap();
                expect(p, near(x, target, 0.05), || format!("x({kn}) = {x}"));
            }
            for (x, t, what) in [
                (9f64.powf(1.0 / 9.0), 1.27, "9^(1/9)"),
                (9f64.powf(0.2), 1.55, "9^(1/5)"),
                (7f64.powf(0.2), 1.47, "7^(1/5)"),
            ] {
                expect(p, near(x, t, 0.01), || format!("{what} = {x}"));
            }
            let chain = [9f64.powf(0.2), 4f64.powf(1.0 / 3.0), 3f64.sqrt(), 2.0];
            expect(p, chain.windows(2).all(|w| w[0] < w[1]), || {
                format!("{chain:?}")
            });
            for c in [10u64, 100, 1000] {
                let o = upper_bound_optimum(c).unwrap();
                let rel = (o.grid_argmax - o.r_star).abs() / o.r_star;
                expect(p, rel < 1e-6 && o.certified, || {
                    format!(
                        "c = {c}: grid {} vs r* {} (rel {rel:e})",
                        o.grid_argmax, o.r_star
                    )
                });
            }
        },
    ));

    outcomes.push(run(
        10,
        "derived-quotient order sequence and prefix lengths",
        |p| {
            let computed = derived_quotient_orders(14).unwrap();
            let printed = printed_quotient_orders();
            expect(p, computed[..12] == printed[..12], || {
                "first 12 orders differ".into()
            });
            let prefixes: Vec<u64> = (1..=8)
                .map(|d| cs_prefix(d).unwrap().to_u64().unwrap())
                .collect();
            expect(p, prefixes == [1, 2, 4, 5, 7, 8, 14, 15], || {
                format!("prefixes {prefixes:?}")
            });
            for (d, (&got, &reference)) in prefixes.iter().zip(&C_S_REFERENCE).enumerate() {
                let d = d + 1;
                let ok = if d == 7 {
                    got == reference + 1
                } else {
                    got == reference
                };
                expect(p, ok, || format!("d = {d}: prefix {got}, c_S {reference}"));
            }
            expect(
                p,
                computed[12].exponent == BigUint::from(1u32) << 81u32,
                || format!("term 13 = {}", computed[12]),
            );
            if computed[12] != printed[12] {
                println!(
                    "  [10] flagged: term 13 computed {}, printed 3^(2·3^81)",
                    computed[12]
                );
            }
        },
    ));

    outcomes.push(run(
        11,
        "brute-force oracle reproduces orders and derived series",
        |p| {
            let s2 = symmetric_group(2).unwrap();
            let s3 = symmetric_group(3).unwrap();
            let corpus: Vec<(&str, PermutationGroup)> = vec![
                ("S4", symmetric_group(4).unwrap()),
                ("D8", common::group(4, &["(1,2,3,4)", "(1,3)"])),
                (
                    "Q8",
                    common::group(8, &["(1,2,3,4)(5,6,7,8)", "(1,5,3,7)(2,8,4,6)"]),
                ),
                ("GL(2,3)", named_group(NamedGroup::G8)),
                ("G9", named_group(NamedGroup::G9)),
                ("W3", iterated_wreath(&s2, 3).unwrap()),
                ("H7", named_group(NamedGroup::H7)),
                ("S3 wr S2", wreath(&s3, &s2)),
                ("U4(F2)", unitriangular(2, 4).unwrap()),
                (
                    "A3 wr A3",
                    wreath(&named_group(NamedGroup::A3), &named_group(NamedGroup::A3)),
                ),
            ];
            for (name, g) in &corpus {
                let n = common::elements(g).len();
                expect(p, g.order() == BigUint::from(n), || {
                    format!("{name}: |G| = {}", g.order())
                });
                let mut chain: Vec<usize> = derived_series(g, 64)
                    .unwrap()
                    .terms
                    .iter()
                    .map(|t| t.order().to_usize().unwrap())
                    .collect();
                chain.dedup();
                let oracle = common::derived_series_orders(g);
                expect(p, chain == oracle, || {
                    format!("{name}: {chain:?} vs {oracle:?}")
                });
            }
            // Witness side of the minimality tables.
            let w3 = iterated_wreath(&s2, 3).unwrap();
            let beta23 = BETA_REFERENCE
                .iter()
                .find(|b| b.d == 3 && b.value == 7)
                .unwrap();
            let c_w3 = factorize(&w3.order()).unwrap().exponent_sum();
            expect(
                p,
                derived_length(&w3).unwrap() == 3 && c_w3 == beta23.value,
                || format!("W_3 has c = {c_w3}"),
            );
            for d in 1..=6u32 {
                let c = factorize(&iterated_wreath(&s2, d as usize).unwrap().order())
                    .unwrap()
                    .exponent_sum();
                let (_, hi) = cn_coarse_bounds(d);
                expect(p, BigUint::from(c) <= hi, || {
                    format!("c(W_{d}) = {c} above 2^d - 1")
                });
            }
        },
    ));

    let mut unexpected = Vec::new();
    for o in &outcomes {
        let status = if o.problems.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "{status} criterion {:>2}: {} ({:.2?})",
            o.id, o.title, o.elapsed
        );
        for problem in &o.problems {
            println!("  {problem}");
        }
        if !o.problems.is_empty() && !EXPECTED_FAILURES.contains(&o.id) {
            unexpected.push(o.id);
        }
        if o.problems.is_empty() && EXPECTED_FAILURES.contains(&o.id) {
            println!(
                "  note: criterion {} was expected to fail and now passes",
                o.id
            );
        }
    }
    if !full {
        println!(
            "opt-in members skipped; rerun with --include-ignored for degrees 243..648 and H_343"
        );
    }
    if unexpected.is_empty() {
        println!("acceptance: only the known-false criterion {EXPECTED_FAILURES:?} failed");
    } else {
        println!("acceptance: unexpected failures in criteria {unexpected:?}");
        std::process::exit(1);
    }
}
