//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Runs without the libtest harness; the process exits nonzero if any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use alterweight::convert::{nivat_decompose, wafa_to_wfta, wfta_hom_to_wafa};
use alterweight::groebner::{buchberger, divide, MonomialOrder};
use alterweight::pa::{Budget, EquivalenceVerdict, PolyAutomaton, ZeronessVerdict};
use alterweight::semiring::SemiringOps;
use alterweight::tree::RankedAlphabet;
use alterweight::wfta::StepFunction;
use alterweight::{fixtures, Element, Error, Polynomial, Semiring, TreeHomomorphism, Wafa};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show(w: &[char]) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        w.iter().collect()
    }
}

fn e<T>(r: alterweight::Result<T>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

/// 200 automata per semiring; quadratic initial polynomials in every
/// other one.
fn population() -> Vec<Wafa> {
    let mut out = Vec::new();
    for (k, sr) in common::SEMIRINGS.iter().enumerate() {
        let mut rng = common::rng(1000 + k as u64);
        for i in 0..200 {
            out.push(common::wafa(&mut rng, sr, i % 2 == 1));
        }
    }
    out
}

fn criterion_1() -> Check {
    let a = fixtures::running();
    for i in 0..=3u32 {
        for j in 0..=3u32 {
            let mut w = vec!['a'; i as usize];
            w.extend(std::iter::repeat('b').take(j as usize));
            let want = num_bigint::BigUint::from(2u32).pow(j * 2u32.pow(i));
            let got = e(a.behavior(&w))?;
            ensure(got == Element::Nat(want.clone()), || {
                format!("{}: {got} ≠ {want}", show(&w))
            })?;
        }
    }
    ensure(
        e(a.behavior(&['a', 'a', 'b', 'b']))? == Element::nat(256),
        || "aabb ≠ 256".into(),
    )?;
    let mut off = 0;
    for w in common::words(&['a', 'b'], 5) {
        let in_lang = w.iter().skip_while(|&&c| c == 'a').all(|&c| c == 'b');
        if !in_lang {
            off += 1;
            ensure(e(a.behavior(&w))? == Element::nat(0), || {
                format!("{} should be 0", show(&w))
            })?;
        }
    }
    Ok(format!("16 golden values, {off} words outside a*b* are 0"))
}

fn criterion_2(pop: &[Wafa]) -> Check {
    let words = |a: &Wafa| common::words(a.alphabet(), 5);
    for (idx, a) in pop.iter().enumerate() {
        let nice = e(a.make_nice())?;
        let pure = e(nice.make_pure())?;
        let eq = e(nice.equalize())?;
        let both = e(pure.equalize())?;
        ensure(nice.is_nice(), || format!("#{idx}: nice flags"))?;
        ensure(pure.is_nice() && pure.is_pure(), || {
            format!("#{idx}: pure flags")
        })?;
        ensure(eq.is_nice() && eq.equalized_degree().is_some(), || {
            format!("#{idx}: equalized flags")
        })?;
        ensure(
            both.is_nice() && both.is_pure() && both.equalized_degree().is_some(),
            || format!("#{idx}: pure+equalized flags"),
        )?;
        for w in words(a) {
            let want = common::wafa_behavior(a, &w);
            for (stage, b) in [
                ("nice", &nice),
                ("pure", &pure),
                ("equalize", &eq),
                ("pure+equalize", &both),
            ] {
                let got = e(b.behavior(&w))?;
                ensure(got == want, || {
                    format!("#{idx} {stage} at {}: {got} ≠ {want}", show(&w))
                })?;
            }
        }
    }
    Ok(format!("{} automata, 4 stages, |w| ≤ 5", pop.len()))
}

fn criterion_3(pop: &[Wafa]) -> Check {
    for (idx, a) in pop.iter().enumerate() {
        let c = e(wafa_to_wfta(a))?;
        for w in common::words(a.alphabet(), 5) {
            let want = common::wafa_behavior(a, &w);
            let got = e(c.wfta.behavior(&common::full_tree(&w, c.rank)))?;
            ensure(got == want, || {
                format!("#{idx} at {}: {got} ≠ {want}", show(&w))
            })?;
        }
    }
    let mut rng = common::rng(3);
    let source = e(RankedAlphabet::words(&['a', 'b'], 1))?;
    for i in 0..100 {
        let sr = &common::SEMIRINGS[i % 3];
        let alphabet = common::small_alphabet(&mut rng);
        let b = common::wfta(&mut rng, sr, &alphabet, 0.4);
        let h = common::hom(&mut rng, &source, &alphabet);
        let back = e(wfta_hom_to_wafa(&b, &h))?;
        for w in common::words(&['a', 'b'], 4) {
            let image = common::apply_hom(&h, &common::word_tree(&w));
            let want = e(b.behavior(&image))?;
            let got = e(back.behavior(&w))?;
            ensure(got == want, || {
                format!("pair #{i} at {}: {got} ≠ {want}", show(&w))
            })?;
        }
    }
    Ok(format!(
        "{} automata round trip; 100 (wfta, hom) pairs",
        pop.len()
    ))
}

fn criterion_4() -> Check {
    let mut rng = common::rng(4);
    let mut checked = 0;
    for i in 0..100 {
        let sr = &common::SEMIRINGS[i % 3];
        let alphabet = if i % 2 == 0 {
            e(RankedAlphabet::parse_decls(&["f/2", "c/0"]))?
        } else {
            e(RankedAlphabet::parse_decls(&["g/1", "c/0"]))?
        };
        let b = common::wfta(&mut rng, sr, &alphabet, 0.4);
        for t in common::trees(&alphabet, 3) {
            let want = common::wfta_runs(&b, &t);
            let got = e(b.behavior(&t))?;
            ensure(got == want, || {
                format!("automaton #{i} at {t}: {got} ≠ {want}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("100 automata, {checked} (automaton, tree) pairs"))
}

fn criterion_5() -> Check {
    let mut rng = common::rng(5);
    let mut trees_checked = 0;
    for i in 0..50 {
        let sr = &common::SEMIRINGS[i % 3];
        let a = common::wafa(&mut rng, sr, false);
        let d = e(nivat_decompose(&a))?;
        ensure(d.hom.is_linear() && d.hom.is_non_deleting(), || {
            format!("#{i}: h flags")
        })?;
        ensure(d.weights.n() == 1, || {
            format!("#{i}: A_w has {} states", d.weights.n())
        })?;
        e(d.consistency.audit())?;
        for w in common::words(a.alphabet(), 4) {
            let want = common::wafa_behavior(&a, &w);
            let got = e(d.eval(&common::full_tree(&w, d.rank)))?;
            ensure(got == want, || {
                format!("#{i} at {}: {got} ≠ {want}", show(&w))
            })?;
        }
        for t in common::trees(d.source.alphabet(), 3) {
            let want = common::wfta_runs(&d.source, &t);
            let got = e(d.eval(&t))?;
            ensure(got == want, || format!("#{i} at {t}: {got} ≠ {want}"))?;
            trees_checked += 1;
        }
    }
    Ok(format!("50 decompositions, {trees_checked} trees"))
}

fn r_closed_form(w: &[char]) -> Element {
    let sr = Semiring::Bool;
    let i = w.iter().take_while(|&&c| c == 'a').count();
    let rest = &w[i..];
    let value = |exp: u32| Element::Poly(Polynomial::monomial(Element::Bool(true), vec![exp], &sr));
    let zero = Element::Poly(Polynomial::zero(1));
    if rest.first() != Some(&'$') {
        return zero;
    }
    let rest = &rest[1..];
    let k = rest.iter().take_while(|&&c| c == 'c').count();
    if rest[k..].iter().all(|&c| c == 'd') {
        value((k * i) as u32)
    } else {
        zero
    }
}

fn criterion_6(pop: &[Wafa]) -> Check {
    let mut rng = common::rng(6);
    let mut deleting = 0;
    for i in 0..50 {
        let a = &pop[(i * 11) % pop.len()];
        let images = common::word_images(&mut rng, &['c', 'd'], a.alphabet());
        if images.iter().any(|(_, u)| u.is_empty()) {
            deleting += 1;
        }
        let h = e(TreeHomomorphism::from_word_map(
            &['c', 'd'],
            a.alphabet(),
            &images,
        ))?;
        let inv = e(a.inverse_word_hom(&h))?;
        for w in common::words(&['c', 'd'], 5) {
            let hw: Vec<char> = w
                .iter()
                .flat_map(|c| images.iter().find(|(x, _)| x == c).unwrap().1.clone())
                .collect();
            let want = common::wafa_behavior(a, &hw);
            let got = e(inv.behavior(&w))?;
            ensure(got == want, || {
                format!("pair #{i} at {}: {got} ≠ {want}", show(&w))
            })?;
        }
    }
    ensure(deleting > 0, || "no deleting homomorphism was drawn".into())?;

    let r = fixtures::witness_r();
    for w in common::words(r.alphabet(), 6) {
        let got = e(r.behavior(&w))?;
        let want = r_closed_form(&w);
        ensure(got == want, || format!("r at {}: {got} ≠ {want}", show(&w)))?;
    }
    let h = fixtures::witness_hom();
    for i in 0..=3usize {
        for j in 0..=3usize {
            let mut w = vec!['a'; i];
            w.push('$');
            w.extend(std::iter::repeat('b').take(j));
            let want = Element::Poly(Polynomial::from_terms(
                1,
                (0..=j).map(|k| (vec![(k * i) as u32], Element::Bool(true))),
                &Semiring::Bool,
            ));
            let got = e(r.image_behavior(&h, &w, 1 << 12))?;
            ensure(got == want, || {
                format!("h(r) at {}: {got} ≠ {want}", show(&w))
            })?;
        }
    }
    let aa_bb = e(r.image_behavior(&h, &['a', 'a', '$', 'b', 'b'], 1 << 12))?;
    ensure(aa_bb.to_string() == "x1^4 + x1^2 + 1", || {
        format!("aa$bb gives {aa_bb}")
    })?;
    Ok(format!(
        "50 pairs ({deleting} deleting); witness checked on |w| ≤ 6 and 16 images"
    ))
}

fn criterion_7() -> Check {
    let mut rng = common::rng(7);
    let mut trees = 0;
    for i in 0..20 {
        let sr = if i % 2 == 0 {
            Semiring::Bool
        } else {
            Semiring::Nat
        };
        let sigma = common::small_alphabet(&mut rng);
        let delta = common::small_alphabet(&mut rng);
        let cells = (0..rand::Rng::gen_range(&mut rng, 1..=3))
            .map(|_| {
                (
                    common::dta(&mut rng, &delta),
                    common::nonzero_element(&mut rng, &sr),
                )
            })
            .collect();
        let f = e(StepFunction::new(sr.clone(), cells))?;
        let p = e(f.partition())?;
        let h = common::hom(&mut rng, &sigma, &delta);
        let composed = e(p.compose_hom(&h))?;
        for t in common::trees(&sigma, 3) {
            let image = common::apply_hom(&h, &t);
            let want = e(f.eval(&image))?;
            ensure(e(p.eval(&image))? == want, || {
                format!("#{i}: partition differs at {image}")
            })?;
            let got = e(composed.eval(&t))?;
            ensure(got == want, || format!("#{i} at {t}: {got} ≠ {want}"))?;
            trees += 1;
        }
    }
    Ok(format!("20 (step function, hom) pairs, {trees} trees"))
}

fn criterion_8(pop: &[Wafa]) -> Check {
    for (idx, a) in pop.iter().enumerate() {
        let p = a.to_pa();
        for w in common::words(a.alphabet(), 6) {
            let reversed: Vec<char> = w.iter().rev().copied().collect();
            let want = common::wafa_behavior(a, &w);
            let got = e(p.behavior(&reversed))?;
            ensure(got == want, || {
                format!("#{idx} at {}: {got} ≠ {want}", show(&w))
            })?;
        }
        ensure(e(p.to_wafa())? == *a, || {
            format!("#{idx}: pa_to_wafa is not inverse")
        })?;
    }
    Ok(format!("{} automata, |w| ≤ 6", pop.len()))
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> Result<T, String> {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    ensure(took <= limit, || format!("{what} took {took:?}"))?;
    Ok(out)
}

fn criterion_9() -> Check {
    let budget = Budget::default();
    let limit = Duration::from_secs(10);
    for (name, p) in fixtures::zero_fixtures() {
        match timed(limit, name, || p.zeroness(&budget))? {
            Ok(ZeronessVerdict::Zero { certificate }) => {
                ensure(e(p.audit_certificate(&certificate))?, || {
                    format!("{name}: certificate fails audit")
                })?;
            }
            other => return Err(format!("{name}: expected Zero, got {other:?}")),
        }
    }
    for (name, p, len) in fixtures::nonzero_fixtures() {
        match timed(limit, name, || p.zeroness(&budget))? {
            Ok(ZeronessVerdict::NonZero { witness, value }) => {
                let again = e(p.behavior(&witness))?;
                ensure(again == value && !p.semiring().is_zero(&value), || {
                    format!("{name}: witness {} re-evaluates to {again}", show(&witness))
                })?;
                ensure(witness.len() == len, || {
                    format!("{name}: witness {} not minimal", show(&witness))
                })?;
            }
            other => return Err(format!("{name}: expected NonZero, got {other:?}")),
        }
    }
    let ex = fixtures::running_rat();
    match e(ex.equivalence(&fixtures::running_perturbed(), &budget))? {
        EquivalenceVerdict::NotEqual { witness, .. } => ensure(witness == vec!['b'], || {
            format!("witness {}", show(&witness))
        })?,
        other => return Err(format!("running vs perturbation: {other:?}")),
    }
    match e(fixtures::doubling_single().equivalence(&fixtures::doubling_split(), &budget))? {
        EquivalenceVerdict::Equal { .. } => {}
        other => return Err(format!("doubling encodings: {other:?}")),
    }
    let stress: PolyAutomaton = fixtures::stress_pa();
    match stress.zeroness(&budget) {
        Err(Error::ResourceExhausted(_)) => {}
        other => return Err(format!("stress fixture under default budget: {other:?}")),
    }
    let generous = Budget {
        max_steps: 100,
        max_degree: 1000,
    };
    match e(stress.zeroness(&generous))? {
        ZeronessVerdict::NonZero { witness, .. } => {
            ensure(witness.len() == 7, || "stress witness".into())?
        }
        other => return Err(format!("stress fixture under a larger budget: {other:?}")),
    }
    Ok("10 zero + 10 nonzero fixtures, 2 equivalences, stress fixture exhausts the budget".into())
}

fn criterion_10() -> Check {
    let sr = Semiring::Rat;
    let p = |s: &str, n| Polynomial::parse(s, n, &sr).map_err(|err| err.to_string());
    let g = e(buchberger(
        &[p("x1^2 - 1", 2)?, p("x1*x2 - 1", 2)?],
        MonomialOrder::GradedLex,
    ))?;
    let got: Vec<String> = g.generators().iter().map(ToString::to_string).collect();
    ensure(got == ["x2^2 - 1", "x1 - x2"], || {
        format!("cross-reduction gave {got:?}")
    })?;
    ensure(g.audit(), || "audit of the cross-reduction basis".into())?;

    let mut rng = common::rng(10);
    for i in 0..30 {
        let n = 1 + i % 3;
        let fs: Vec<Polynomial> = (0..2 + i % 2)
            .map(|_| common::polynomial(&mut rng, n, &sr, 2, 3, true))
            .collect();
        for order in [MonomialOrder::GradedLex, MonomialOrder::Lex] {
            let basis = e(buchberger(&fs, order))?;
            ensure(basis.audit(), || {
                format!("set #{i}: S-polynomials do not reduce to 0")
            })?;
            for f in &fs {
                ensure(e(basis.contains(f))?, || {
                    format!("set #{i}: generator outside its ideal")
                })?;
            }
            let target = common::polynomial(&mut rng, n, &sr, 3, 4, true);
            let div = e(divide(&target, &fs, order))?;
            let mut sum = div.remainder.clone();
            for (q, f) in div.quotients.iter().zip(&fs) {
                sum = e(sum.add(&e(q.mul(f, &sr))?, &sr))?;
            }
            ensure(sum == target, || {
                format!("set #{i}: division identity fails")
            })?;
        }
    }
    Ok("cross-reduction, 60 audited bases, 60 division identities".into())
}

fn main() -> ExitCode {
    let pop = population();
    let limits = [1u64, 60, 120, 60, 120, 60, 60, 60, 200, 5];
    let criteria: Vec<(&str, Box<dyn Fn() -> Check>)> = vec![
        ("running example golden values", Box::new(criterion_1)),
        (
            "normal forms preserve behavior",
            Box::new(|| criterion_2(&pop)),
        ),
        (
            "tree compilation round trip",
            Box::new(|| criterion_3(&pop)),
        ),
        (
            "tree automaton dynamic programming vs runs",
            Box::new(criterion_4),
        ),
        ("Nivat decomposition", Box::new(criterion_5)),
        (
            "inverse homomorphisms and the non-closure witness",
            Box::new(|| criterion_6(&pop)),
        ),
        ("step functions under homomorphisms", Box::new(criterion_7)),
        (
            "polynomial automaton correspondence",
            Box::new(|| criterion_8(&pop)),
        ),
        ("zeroness and equivalence", Box::new(criterion_9)),
        ("Gröbner kernel", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (k, ((name, run), limit)) in criteria.iter().zip(limits).enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => {
                println!(
                    "criterion {:>2}: PASS  {name}: {detail} [{took:.2?}, limit {limit}s]",
                    k + 1
                );
                if took > Duration::from_secs(limit) {
                    println!(
                        "              note: exceeded the {limit}s budget of an optimized build"
                    );
                }
            }
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {msg} [{took:.2?}]", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
