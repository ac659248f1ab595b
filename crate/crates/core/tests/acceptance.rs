//! End-to-end checks of the main results, one line per criterion.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use brauer::canonical::{
    alpha, build_canonical, check_presentation, extract_params, generator, mult_map_fiber, params_from_xy,
    phi_recursion, slots, staggered_value, tail_value,
};
use brauer::classify::{
    conjugate, enumerate_all, enumerate_canonical, expected_stabilizer_element, stabilizer, stabilizer_pruned, Strategy,
};
use brauer::green::{binomial, double_factorial_odd, enumerate_elements, related, GreenRelation};
use brauer::hd::{
    chain_d_section, closure, d_from_is, h_cross_section_check, idempotents, lift, verify_d_cross_section, HMethod,
};
use brauer::iso::{find_isomorphism, is_isomorphism};
use brauer::{BrauerDiagram, CrossSection, ParamTable, PartialInjection, Permutation, XYParams};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fmt_err(e: brauer::Error) -> String {
    e.to_string()
}

fn random_diagram(n: usize, rng: &mut ChaCha8Rng) -> BrauerDiagram {
    let mut pts: Vec<u8> = (0..2 * n as u8).collect();
    pts.shuffle(rng);
    let mut partner = vec![0u8; 2 * n];
    for p in pts.chunks(2) {
        partner[p[0] as usize] = p[1];
        partner[p[1] as usize] = p[0];
    }
    BrauerDiagram::from_partner(&partner).unwrap()
}

fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    Permutation::from_images(&v).unwrap()
}

fn monoid_sanity() -> Outcome {
    for n in 1..=6 {
        let all: Vec<BrauerDiagram> = enumerate_elements(n).map_err(fmt_err)?.collect();
        let distinct: HashSet<&BrauerDiagram> = all.iter().collect();
        let want = double_factorial_odd(n) as usize;
        ensure(all.len() == want && distinct.len() == want, || {
            format!("|B_{n}| = {} ({} distinct), want {want}", all.len(), distinct.len())
        })?;
    }
    let b3: Vec<BrauerDiagram> = enumerate_elements(3).map_err(fmt_err)?.collect();
    let mut triples = 0;
    for a in &b3 {
        for b in &b3 {
            for c in &b3 {
                triples += 1;
                ensure(&(a * b) * c == a * &(b * c), || format!("({a})({b})({c}) not associative"))?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let per_n = 10_000;
    for n in 4..=8 {
        for _ in 0..per_n {
            let (a, b, c) = (random_diagram(n, &mut rng), random_diagram(n, &mut rng), random_diagram(n, &mut rng));
            ensure(&(&a * &b) * &c == &a * &(&b * &c), || format!("n={n}: ({a})({b})({c}) not associative"))?;
        }
    }
    Ok(format!("(2n-1)!! for n=1..6; {triples} triples in B_3; {per_n} random triples each for n=4..8"))
}

/// Green's relations from their definitions by principal ideals, with
/// `σ, τ ∈ Sₙ` witnesses alongside.
fn green_oracle() -> Outcome {
    let mut pairs = 0usize;
    for n in 1..=4 {
        let all: Vec<BrauerDiagram> = enumerate_elements(n).map_err(fmt_err)?.collect();
        let perms: Vec<BrauerDiagram> = Permutation::all(n).map(|p| BrauerDiagram::from_permutation(&p)).collect();
        let mut sorted = all.clone();
        sorted.sort();
        let pos = |x: &BrauerDiagram| sorted.binary_search(x).unwrap();
        let size = all.len();
        let ideal = |side: bool, a: &BrauerDiagram| {
            let mut bits = vec![false; size];
            for s in &all {
                bits[pos(&if side { a * s } else { s * a })] = true;
            }
            bits
        };
        let right: Vec<Vec<bool>> = all.iter().map(|a| ideal(true, a)).collect();
        let left: Vec<Vec<bool>> = all.iter().map(|a| ideal(false, a)).collect();
        let two: Vec<Vec<bool>> = all
            .iter()
            .map(|a| {
                let mut bits = vec![false; size];
                for s in &all {
                    let sa = s * a;
                    for t in &all {
                        bits[pos(&(&sa * t))] = true;
                    }
                }
                bits
            })
            .collect();
        for (x, a) in all.iter().enumerate() {
            for (y, b) in all.iter().enumerate() {
                pairs += 1;
                let r = right[x] == right[y];
                let l = left[x] == left[y];
                let d = (0..size).any(|z| right[x] == right[z] && left[z] == left[y]);
                let j = two[x] == two[y];
                let r_wit = perms.iter().any(|s| &(a * s) == b);
                let l_wit = perms.iter().any(|s| &(s * a) == b);
                let d_wit = perms.iter().any(|s| {
                    let sa = s * a;
                    perms.iter().any(|t| &(&sa * t) == b)
                });
                let pred = |rel| related(a, b, rel).unwrap();
                let cases = [
                    ("R", pred(GreenRelation::R), r, r_wit),
                    ("L", pred(GreenRelation::L), l, l_wit),
                    ("H", pred(GreenRelation::H), r && l, r_wit && l_wit),
                    ("D", pred(GreenRelation::D), d, d_wit),
                    ("J", pred(GreenRelation::J), j, d_wit),
                ];
                for (name, p, def, wit) in cases {
                    ensure(p == def && p == wit, || {
                        format!("n={n} {name}: predicate {p}, ideals {def}, witness {wit} for {a} vs {b}")
                    })?;
                }
            }
        }
    }
    Ok(format!("{pairs} ordered pairs for n=1..4, five relations each"))
}

fn canonical_construction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut sections: Vec<CrossSection> = Vec::new();
    let mut tables = 0;
    for n in 4..=7 {
        for b in 0u64..1 << slots(n).len() {
            tables += 1;
            let t = ParamTable::from_bits(n, b);
            if let Ok(cs) = build_canonical(n, &t) {
                if cs.verify().is_ok() {
                    sections.push(cs);
                }
            }
        }
    }
    let counted = sections.len();
    for xy in [XYParams::regular(8), XYParams::alternating(8)] {
        let cs = build_canonical(8, &params_from_xy(&xy)).map_err(fmt_err)?;
        let r = cs.verify();
        ensure(r.is_ok(), || format!("n=8 {xy}: {r:?}"))?;
        sections.push(cs);
    }
    let mut fibers = 0;
    for cs in &sections {
        let n = cs.n();
        for k in 0..=n / 2 {
            let stratum: Vec<&BrauerDiagram> = cs.stratum(2 * k).collect();
            let want = binomial(n, 2 * k) * double_factorial_odd(k);
            ensure(stratum.len() as u128 == want, || {
                format!("n={n} corank {}: {} elements, want {want}", 2 * k, stratum.len())
            })?;
            let fact: usize = (1..=k).product();
            let sample: Vec<&&BrauerDiagram> = stratum.choose_multiple(&mut rng, 20).collect();
            for a in sample {
                let f = mult_map_fiber(cs, a).map_err(fmt_err)?;
                fibers += 1;
                ensure(f == fact, || format!("n={n}: fiber of {a} has {f} tuples, want {fact}"))?;
            }
        }
    }
    Ok(format!(
        "{tables} tables at n=4..7 ({counted} valid, all fully verified) plus regular/alternating at n=8; strata sizes match; {fibers} fibers equal k!"
    ))
}

fn canonical_counts() -> Outcome {
    let want = [(4, 2), (5, 8), (6, 16), (7, 8)];
    let mut got = Vec::new();
    for (n, w) in want {
        let c = enumerate_canonical(n).map_err(fmt_err)?.len();
        got.push(format!("n={n}: {c}"));
        ensure(c == w, || format!("n={n}: {c} canonical sections, want {w}"))?;
    }
    Ok(got.join(", "))
}

fn full_classification() -> Outcome {
    let mut notes = Vec::new();
    for (n, want) in [(1, 1), (2, 1), (3, 3), (4, 12)] {
        let (all, _) = enumerate_all(n, Strategy::Backtrack).map_err(fmt_err)?;
        ensure(all.iter().all(|c| c.verify().is_ok()), || format!("n={n}: unverified section"))?;
        ensure(all.len() == want, || format!("n={n}: backtracking found {}, want {want}", all.len()))?;
        notes.push(format!("n={n}: {}", all.len()));
    }
    let (a, _) = enumerate_all(4, Strategy::Backtrack).map_err(fmt_err)?;
    let (b, _) = enumerate_all(4, Strategy::Orbits).map_err(fmt_err)?;
    ensure(a == b, || "n=4: strategies disagree".into())?;
    let (a5, _) = enumerate_all(5, Strategy::Backtrack).map_err(fmt_err)?;
    for (n, want) in [(5u128, 240u128), (6, 1440), (7, 5040)] {
        let n = n as usize;
        let (all, report) = enumerate_all(n, Strategy::Orbits).map_err(fmt_err)?;
        ensure(report.total == want && all.len() as u128 == want, || {
            format!("n={n}: orbit total {}, materialized {}, want {want}", report.total, all.len())
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let checked: Vec<&CrossSection> =
            if n < 7 { all.iter().collect() } else { all.choose_multiple(&mut rng, 200).collect() };
        ensure(checked.iter().all(|c| c.verify().is_ok()), || format!("n={n}: an orbit member fails verification"))?;
        if n == 5 {
            ensure(a5 == all, || "n=5: strategies disagree".into())?;
        }
        if n == 7 {
            let sizes: Vec<u128> = report.orbits.iter().map(|o| o.size).collect();
            ensure(sizes == [2520, 2520], || format!("n=7 orbit sizes {sizes:?}"))?;
        }
        notes.push(format!("n={n}: {want}"));
    }
    Ok(format!("{}; strategies agree at n=4,5; n=7 has orbits 2520+2520", notes.join(", ")))
}

fn stabilizers() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in 4..=7 {
        let want = {
            let mut v = vec![Permutation::identity(n), expected_stabilizer_element(n)];
            v.sort();
            v
        };
        for cs in enumerate_canonical(n).map_err(fmt_err)? {
            let st = if n <= 6 { stabilizer(&cs) } else { stabilizer_pruned(&cs).map_err(fmt_err)? };
            checked += 1;
            if st != want {
                let t = extract_params(&cs).map_err(fmt_err)?;
                let shown: Vec<String> = st.iter().map(ToString::to_string).collect();
                bad.push(format!(
                    "n={n} table {} has stabilizer {{{}}}",
                    t.to_text().trim().replace('\n', " "),
                    shown.join(", ")
                ));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{checked} canonical sections at n=4..7 have stabilizer {{id, (n-1 n)·∏(i i+1)}}"))
    } else {
        Err(format!("{} of {checked} differ: {}", bad.len(), bad.join("; ")))
    }
}

fn isomorphisms() -> Outcome {
    let mut notes = Vec::new();
    for n in [6, 7] {
        let a = build_canonical(n, &params_from_xy(&XYParams::regular(n))).map_err(fmt_err)?;
        let b = build_canonical(n, &params_from_xy(&XYParams::alternating(n))).map_err(fmt_err)?;
        let r = find_isomorphism(&a, &b).map_err(fmt_err)?;
        ensure(!r.found, || format!("n={n}: regular and alternating found isomorphic"))?;
        notes.push(format!("n={n} regular/alternating: none ({} nodes)", r.nodes));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut conj = 0;
    for n in 3..=7 {
        let canon = enumerate_canonical(n).map_err(fmt_err)?;
        for _ in 0..3 {
            let cs = &canon[rng.gen_range(0..canon.len())];
            let c = conjugate(cs, &random_permutation(n, &mut rng)).map_err(fmt_err)?;
            let r = find_isomorphism(cs, &c).map_err(fmt_err)?;
            let m = r.mapping.ok_or_else(|| format!("n={n}: conjugate pair not isomorphic"))?;
            ensure(is_isomorphism(cs, &c, &m).map_err(fmt_err)?, || {
                format!("n={n}: returned map is not an isomorphism")
            })?;
            conj += 1;
        }
    }
    notes.push(format!("{conj} conjugate pairs isomorphic"));
    let canon5 = enumerate_canonical(5).map_err(fmt_err)?;
    let mut failures = Vec::new();
    for x in 0..canon5.len() {
        for y in x + 1..canon5.len() {
            if !find_isomorphism(&canon5[x], &canon5[y]).map_err(fmt_err)?.found {
                let bits = |c: &CrossSection| format!("{:03b}", extract_params(c).unwrap().to_bits());
                failures.push(format!("{}~{}", bits(&canon5[x]), bits(&canon5[y])));
            }
        }
    }
    ensure(failures.is_empty(), || {
        format!(
            "{}; n=5: {} of 28 canonical pairs are not isomorphic: {}",
            notes.join("; "),
            failures.len(),
            failures.join(" ")
        )
    })?;
    notes.push("n=5 canonical sections pairwise isomorphic".into());
    Ok(notes.join("; "))
}

fn recursion_and_presentation() -> Outcome {
    let mut images = 0;
    let mut cover = Vec::new();
    for n in 5..=8 {
        let lower: HashSet<CrossSection> = enumerate_canonical(n - 2).map_err(fmt_err)?.into_iter().collect();
        let mut hit = HashSet::new();
        for cs in enumerate_canonical(n).map_err(fmt_err)? {
            let img = phi_recursion(&cs).map_err(fmt_err)?;
            ensure(img.is_canonical() && img.verify().is_ok(), || {
                format!("n={n}: image not a verified canonical section")
            })?;
            ensure(lower.contains(&img), || format!("n={n}: image not among canonical sections of n-2"))?;
            hit.insert(img);
            images += 1;
        }
        cover.push(format!("n={n}: {} of {}", hit.len(), lower.len()));
    }
    for n in 5..=7 {
        for xy in [XYParams::regular(n), XYParams::alternating(n)] {
            let cs = build_canonical(n, &params_from_xy(&xy)).map_err(fmt_err)?;
            let r = check_presentation(&cs).map_err(fmt_err)?;
            ensure(r.is_ok(), || format!("n={n} {xy}: presentation violations {r:?}"))?;
        }
    }
    let short = [((1, 3), (1, 2), (2, 4), (1, 2)), ((2, 3), (1, 2), (1, 4), (1, 2)), ((1, 2), (1, 2), (3, 4), (1, 2))];
    let long = [
        ((2, 3), (2, 3), (4, 5), (2, 3)),
        ((2, 4), (1, 2), (1, 5), (1, 2)),
        ((1, 4), (1, 2), (2, 5), (1, 2)),
        ((3, 5), (2, 3), (2, 4), (2, 3)),
        ((3, 4), (2, 3), (2, 5), (2, 3)),
        ((1, 5), (1, 3), (3, 4), (1, 3)),
        ((1, 3), (2, 3), (4, 5), (1, 3)),
    ];
    let mut relations = 0;
    for n in [6, 7] {
        let rels: &[_] = if n == 6 { &short } else { &long };
        for cs in enumerate_canonical(n).map_err(fmt_err)? {
            let g = |(i, j): (usize, usize)| generator(&cs, i, j).map_err(fmt_err);
            for &(a, b, c, d) in rels {
                relations += 1;
                ensure(g(a)? * g(b)? == g(c)? * g(d)?, || format!("n={n}: a{a:?}a{b:?} != a{c:?}a{d:?}"))?;
            }
        }
    }
    Ok(format!(
        "{images} canonical images verified for n=5..8 (distinct images {}); presentation clean at n=5..7; {relations} relation instances hold at n=6,7",
        cover.join(", ")
    ))
}

fn h_and_d_sections() -> Outcome {
    let r3 = h_cross_section_check(3).map_err(fmt_err)?;
    let e3 = idempotents(3).map_err(fmt_err)?;
    ensure(r3.exists && r3.unique == Some(true) && r3.section.as_deref() == Some(&e3[..]), || format!("n=3: {r3:?}"))?;
    let r4 = h_cross_section_check(4).map_err(fmt_err)?;
    let cert = r4.certificate.clone().ok_or("n=4: no certificate")?;
    let cl = closure(&idempotents(4).map_err(fmt_err)?);
    ensure(
        !r4.exists
            && r4.method == HMethod::Closure
            && cert.first != cert.second
            && related(&cert.first, &cert.second, GreenRelation::H).unwrap()
            && cl.binary_search(&cert.first).is_ok()
            && cl.binary_search(&cert.second).is_ok(),
        || format!("n=4 certificate rejected: {cert:?}"),
    )?;
    let mut products = 0;
    for n in 4..=8 {
        let m = n / 2;
        let chain = chain_d_section(m);
        let d = d_from_is(&chain, n).map_err(fmt_err)?;
        let r = verify_d_cross_section(n, &d.diagrams());
        ensure(r.is_ok() && d.elements.len() == m + 1, || format!("n={n}: {r:?}"))?;
        for gamma in [chain, PartialInjection::all(m)] {
            for f in &gamma {
                for g in &gamma {
                    products += 1;
                    let lhs = &lift(f, n).map_err(fmt_err)? * &lift(g, n).map_err(fmt_err)?;
                    ensure(lhs == lift(&f.then(g), n).map_err(fmt_err)?, || format!("n={n}: lift of {f}·{g}"))?;
                }
            }
        }
    }
    Ok(format!(
        "n=3 H-section = {} idempotents, unique; n=4 pair {} / {} in a closure of {}; chain lifts verified for n=4..8; lift multiplicative on {products} pairs",
        e3.len(),
        cert.first,
        cert.second,
        cl.len()
    ))
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut count = 0;
    for _ in 0..2000 {
        let n = rng.gen_range(1..=9);
        let (a, b) = (random_diagram(n, &mut rng), random_diagram(n, &mut rng));
        let p = &a * &b;
        ensure(p.involution() == &b.involution() * &a.involution(), || format!("involution fails on {a}, {b}"))?;
        ensure(p.corank() <= a.corank() + b.corank(), || format!("corank of {a}·{b}"))?;
        ensure(a.corank() % 2 == 0 && p.corank() % 2 == 0, || format!("odd corank at {a}"))?;
        ensure(a.stable_rank() <= a.rank(), || format!("stable rank of {a}"))?;
        count += 1;
    }
    for n in 4..=9 {
        for xy in XYParams::all(n) {
            let t = params_from_xy(&xy);
            let cs = build_canonical(n, &t).map_err(fmt_err)?;
            ensure(extract_params(&cs).map_err(fmt_err)? == t, || format!("n={n} {xy}: round trip"))?;
        }
    }
    let mut laws = 0;
    while laws < 1000 {
        let n = rng.gen_range(7..=9);
        let all = XYParams::all(n);
        let t = params_from_xy(&all[rng.gen_range(0..all.len())]);
        let (j, t2) = (rng.gen_range(2..n - 1), rng.gen_range(2..n - 1));
        let (i, s) = (rng.gen_range(1..j), rng.gen_range(1..t2));
        let lmax = ((n - j) / 2).min(((n - t2) / 2).saturating_sub(1));
        if lmax == 0 {
            continue;
        }
        let l = rng.gen_range(1..=lmax);
        let (a, b) = (alpha(n, &t, i, j).map_err(fmt_err)?, alpha(n, &t, s, t2).map_err(fmt_err)?);
        let want = tail_value(&a, l).zip(tail_value(&b, l + 1)).map(|(x, y)| x * y);
        ensure(want.is_some() && staggered_value(&(&a * &b), l) == want, || {
            format!("n={n}: law fails for ({i},{j}),({s},{t2}), l={l}")
        })?;
        laws += 1;
    }
    Ok(format!("{count} random pairs, round trip at n=4..9, {laws} staggered products at n=7..9"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("monoid sanity", Duration::from_secs(10), monoid_sanity),
        ("Green's relations against definitions", Duration::from_secs(60), green_oracle),
        ("canonical construction", Duration::from_secs(300), canonical_construction),
        ("canonical counts", Duration::from_secs(600), canonical_counts),
        ("full classification counts", Duration::from_secs(900), full_classification),
        ("stabilizers", Duration::from_secs(300), stabilizers),
        ("isomorphism classes", Duration::from_secs(600), isomorphisms),
        ("recursion and presentation", Duration::from_secs(120), recursion_and_presentation),
        ("H- and D-cross-sections", Duration::from_secs(60), h_and_d_sections),
        ("property suites", Duration::from_secs(60), properties),
    ];
    let mut failed = 0;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let slow = took > *budget;
        match out {
            Ok(detail) if !slow => println!("PASS {:>2} {name} ({took:.2?}): {detail}", k + 1),
            Ok(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2?} > {budget:?}): {detail}", k + 1);
            }
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2?}): {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
