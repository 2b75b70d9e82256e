//! Acceptance suite: the headline guarantees, one test per criterion,
//! each printing a single pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines; any failure carries the criterion tag in its panic message.

use num::Zero;

use dualbraid::braid_gh;
use dualbraid::braid_wx;
use dualbraid::hopf;
use dualbraid::poisson::PoissonBivector;
use dualbraid::quea::{self, PbwElement, PbwKey};
use dualbraid::report::{self, SuiteConfig};
use dualbraid::series::{rat, RingSignature, Series};

fn verdict(criterion: &str, ok: bool, detail: &str) {
    if ok {
        println!("PASS {criterion}: {detail}");
    } else {
        println!("FAIL {criterion}: {detail}");
        panic!("{criterion} failed: {detail}");
    }
}

#[test]
fn criterion_1_braiding_coincidence_order_8() {
    let n = 8;
    let gh = braid_gh::full(n);
    let closed = braid_wx::closed_form(n);
    let pipeline = braid_wx::matrix_pipeline(n);
    let a = gh.agrees_with(&closed, n);
    let b = gh.agrees_with(&pipeline, n);
    verdict(
        "criterion-1",
        a.is_ok() && b.is_ok(),
        &format!(
            "flow-built braiding coincides with the factorization closed form and matrix pipeline, coefficient-exact at order {n}{}",
            match (a, b) {
                (Err(m), _) | (_, Err(m)) => format!(" -- {m}"),
                _ => String::new(),
            }
        ),
    );
}

#[test]
fn criterion_2_closed_form_cross_checks_order_6() {
    let n = 6;
    let mut failures = Vec::new();
    for check in braid_gh::flow_closed_form_checks(n) {
        if !check.ok {
            failures.push(format!("{}: {}", check.name, check.detail));
        }
    }
    for check in braid_gh::factorization_checks(n) {
        if !check.ok {
            failures.push(format!("{}: {}", check.name, check.detail));
        }
    }
    verdict(
        "criterion-2",
        failures.is_empty(),
        &format!(
            "both flows match their closed forms and the one-sided exponential factorization holds exactly at order {n}{}",
            if failures.is_empty() { String::new() } else { format!(" -- {}", failures.join("; ")) }
        ),
    );
}

#[test]
fn criterion_3_braiding_axioms() {
    let n = 6;
    let hexagon_order = 5;
    let r = braid_wx::closed_form(n);
    let checks = hopf::check_braiding(&r, n, hexagon_order);
    let failures: Vec<String> = checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    verdict(
        "criterion-3",
        failures.is_empty(),
        &format!(
            "coproduct intertwining at order {n}, both hexagons at order {hexagon_order}, distinct from the flip, two-sided inverse at order {n}{}",
            if failures.is_empty() { String::new() } else { format!(" -- {}", failures.join("; ")) }
        ),
    );
}

#[test]
fn criterion_4_symbolic_yang_baxter() {
    let base = hopf::check_qybe(&braid_wx::closed_form(4), 4);
    let opt_in = hopf::check_qybe(&braid_wx::closed_form(6), 6);
    verdict(
        "criterion-4",
        base.ok && opt_in.ok,
        &format!(
            "Yang-Baxter for the leg operators on the 9-variable ring, exact at order 4 (and at the opt-in order 6){}",
            if base.ok && opt_in.ok { String::new() } else { format!(" -- {} {}", base.detail, opt_in.detail) }
        ),
    );
}

#[test]
fn criterion_5_infinitesimal_triviality() {
    let wx = hopf::infinitesimal_part(&braid_wx::closed_form(4));
    let gh = hopf::infinitesimal_part(&braid_gh::full(4));
    let ok = hopf::is_identity_matrix(&wx) && hopf::is_identity_matrix(&gh);
    verdict(
        "criterion-5",
        ok,
        "both braidings act as the identity on the degree-1 slice, exactly",
    );
}

#[test]
fn criterion_6_poisson_structure_soundness() {
    let n = 6;
    let sig = RingSignature::new(2);
    let mut failures = Vec::new();

    // Jacobi identity on all generator triples.
    if let Some((a, b, c)) = dualbraid::poisson::jacobi_on_generators(sig, n) {
        failures.push(format!(
            "Jacobi fails on ({}, {}, {})",
            sig.var_name(a),
            sig.var_name(b),
            sig.var_name(c)
        ));
    }

    // Jacobi on 25 seeded random composite triples, via the report suite.
    let cfg = SuiteConfig {
        order: n,
        suites: vec!["poisson".into()],
        ..SuiteConfig::default()
    };
    let rep = report::run(&cfg).unwrap();
    for check in &rep.checks {
        if check.status != report::Status::Pass {
            failures.push(format!("{}: {}", check.name, check.details));
        }
    }

    // The braiding preserves the bracket on all 15 generator pairs.
    let internal = n + 1;
    let table = PoissonBivector::standard(sig, internal);
    let r = braid_wx::closed_form(internal);
    for a in 0..6 {
        for b in (a + 1)..6 {
            let fa = Series::var(sig, internal, a);
            let fb = Series::var(sig, internal, b);
            let lhs = r.apply(&table.bracket(&fa, &fb));
            let rhs = table.bracket(&r.apply(&fa), &r.apply(&fb));
            if lhs.truncate(n) != rhs.truncate(n) {
                failures.push(format!(
                    "braiding is not Poisson on ({}, {})",
                    sig.var_name(a),
                    sig.var_name(b)
                ));
            }
        }
    }

    // The coproduct intertwines the one- and two-factor brackets.
    let s1 = RingSignature::new(1);
    let d = hopf::coproduct(internal);
    let t1 = PoissonBivector::standard(s1, internal);
    for a in 0..3 {
        for b in (a + 1)..3 {
            let fa = Series::var(s1, internal, a);
            let fb = Series::var(s1, internal, b);
            let lhs = d.apply(&t1.bracket(&fa, &fb));
            let rhs = table.bracket(&d.apply(&fa), &d.apply(&fb));
            if lhs.truncate(n) != rhs.truncate(n) {
                failures.push(format!(
                    "coproduct is not Poisson on ({}, {})",
                    s1.var_name(a),
                    s1.var_name(b)
                ));
            }
        }
    }

    verdict(
        "criterion-6",
        failures.is_empty(),
        &format!(
            "Jacobi at order {n} (generators + 25 random triples), braiding Poisson on all 15 pairs at order {n}, coproduct Poisson at order {n}{}",
            if failures.is_empty() { String::new() } else { format!(" -- {}", failures.join("; ")) }
        ),
    );
}

#[test]
fn criterion_7_numeric_suite() {
    let rep = braid_wx::numeric_checks(100, 0, 1e-6);
    let ok = rep.divisor_failures == 0
        && rep.max_product_intertwine < 1e-9
        && rep.max_qybe < 1e-9
        && rep.max_poisson_map < 1e-4;
    verdict(
        "criterion-7",
        ok,
        &format!(
            "100 samples at seed 0: product-intertwining residual {:.3e} < 1e-9, pointwise Yang-Baxter residual {:.3e} < 1e-9, finite-difference Poisson residual {:.3e} < 1e-4",
            rep.max_product_intertwine, rep.max_qybe, rep.max_poisson_map
        ),
    );
}

#[test]
fn criterion_8_quantum_algebra_suite() {
    let k = 4;
    let d = 4;
    let mut failures = Vec::new();

    // R mod h^2 = 1 + h (H x H / 4 + X x Y).
    let r = quea::r_matrix(k);
    let hh = PbwKey::from_triples(&[(0, 1, 0), (0, 1, 0)]);
    let xy = PbwKey::from_triples(&[(1, 0, 0), (0, 0, 1)]);
    if r.coeff(&PbwKey::scalar(2)).coeff(0) != rat(1, 1)
        || r.coeff(&hh).coeff(1) != rat(1, 4)
        || r.coeff(&xy).coeff(1) != rat(1, 1)
        || r.iter_terms().any(|(key, c)| {
            *key != PbwKey::scalar(2) && *key != hh && *key != xy && !c.coeff(1).is_zero()
        })
    {
        failures.push("first-order part of R is wrong".to_string());
    }

    // Counit legs, conjugation on X/H/Y, both leg splittings, Yang-Baxter.
    for check in quea::check_quasitriangular(k) {
        if !check.ok {
            failures.push(format!("{}: {}", check.name, check.detail));
        }
    }

    // Valuation growth of the grouplikeness deviations.
    let dotted = [
        PbwElement::dotted_x(k),
        PbwElement::dotted_h(k),
        PbwElement::dotted_y(k),
        PbwElement::dotted_x(k).mul(&PbwElement::dotted_y(k)),
    ];
    for e in &dotted {
        for n in 1..=4 {
            if let Some(v) = quea::delta_n(e, n).valuation() {
                if v < n {
                    failures.push(format!("delta_{n} valuation {v} too small"));
                }
            }
        }
    }

    // Conjugation keeps the graded subalgebra, and specializes onto the
    // braiding.
    let r_inv = r.invert_unipotent();
    let one = PbwElement::one(1, k);
    let wx = braid_wx::closed_form(d);
    let legs = [
        PbwElement::dotted_x(k).tensor(&one),
        PbwElement::dotted_h(k).tensor(&one),
        PbwElement::dotted_y(k).tensor(&one),
        one.tensor(&PbwElement::dotted_x(k)),
        one.tensor(&PbwElement::dotted_h(k)),
        one.tensor(&PbwElement::dotted_y(k)),
    ];
    for g in &legs {
        let conj = quea::ad_r(&r, &r_inv, g);
        if let Err(e) = quea::prime_valuation_check(&conj) {
            failures.push(e.to_string());
            continue;
        }
        let lhs = quea::specialize_prime(&conj, d).unwrap();
        let rhs = wx.apply(&quea::specialize_prime(g, d).unwrap());
        if lhs != rhs {
            failures.push("specialized conjugation differs from the braiding".to_string());
        }
    }

    verdict(
        "criterion-8",
        failures.is_empty(),
        &format!(
            "quantum side at parameter order {k}: first-order R, counit legs, coproduct conjugation mod h^5, leg splittings, Yang-Baxter, valuation growth, graded-subalgebra stability, specialization bridge at degree {d}{}",
            if failures.is_empty() { String::new() } else { format!(" -- {}", failures.join("; ")) }
        ),
    );
}

#[test]
fn criterion_9_infrastructure() {
    // The default run passes end to end and the JSON report is
    // deterministic apart from timing fields.
    let cfg = SuiteConfig::default();
    let a = report::run(&cfg).unwrap();
    let b = report::run(&cfg).unwrap();
    let strip = |r: &report::Report| {
        let mut r = r.clone();
        for c in &mut r.checks {
            c.wall_ms = 0;
        }
        r.to_json()
    };
    let deterministic = strip(&a) == strip(&b);
    verdict(
        "criterion-9",
        a.all_passed() && deterministic,
        &format!(
            "default run: {} checks passed, {} failed; JSON deterministic modulo timings: {}",
            a.summary.passed, a.summary.failed, deterministic
        ),
    );
}
