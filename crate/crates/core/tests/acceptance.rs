use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};

use dessin_core::constructions::{
    build_example14, build_example4, closure, example10_triple, example12_triple, example14_group,
    example5_triple, small_group_name, verify, Example4Group, GOLDEN_IDS, PGL2_7_TABLE,
};
use dessin_core::counting::{
    conjugacy_classes, count_report, count_triples_bruteforce, gamma_index, match_classes, modular_dessin_data,
    pgl2_aut_order, sl2_order_bruteforce, CharacterTable64,
};
use dessin_core::hypermap::{regular_hypermap_from_triple, Role};
use dessin_core::linfp::{gl2_on_vectors, MatGroupHandle};
use dessin_core::triangle::{
    index2_subtriple, index_two_subgroup, parity_classify, rh_genus, GeneratingTriple, TriangleType, Which,
};
use dessin_core::{PermGroup, Permutation};

type Check = Result<String, String>;
type Criterion = fn() -> Check;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn genus_goldens() -> Check {
    let cases: [((u64, u64, u64), u64, i64); 12] = [
        ((3, 6, 6), 120, 21),
        ((3, 6, 6), 336, 57),
        ((3, 6, 6), 362880, 60481),
        ((8, 16, 16), 4896, 1837),
        ((4, 4, 4), 362880, 45361),
        ((2, 8, 8), 362880, 45361),
        ((4, 4, 4), 4896, 613),
        ((2, 8, 8), 4896, 613),
        ((6, 6, 6), 2184, 547),
        ((3, 12, 12), 2184, 547),
        ((2, 3, 7), 168, 3),
        ((2, 3, 8), 48, 2),
    ];
    for ((l, m, n), order, genus) in cases {
        let g = rh_genus(&TriangleType::of(l, m, n), &BigUint::from(order)).map_err(err)?;
        ensure(g == BigInt::from(genus), || format!("({l},{m},{n}) & {order}: {g} ≠ {genus}"))?;
    }
    Ok(format!("{} genera", cases.len()))
}

fn counting_golden() -> Check {
    let table = CharacterTable64::parse(PGL2_7_TABLE).map_err(err)?;
    let pgl = MatGroupHandle::pgl2(7).map_err(err)?;
    let aut = pgl2_aut_order(7).map_err(err)?;
    let r = count_report("pgl2:7", pgl.group(), &TriangleType::of(2, 6, 6), Some(&table), Some(&aut)).map_err(err)?;
    ensure(r.brute_count == 336, || format!("brute {}", r.brute_count))?;
    ensure(r.frobenius_count == Some(336), || format!("frobenius {:?}", r.frobenius_count))?;
    ensure(r.epi_count == 336, || format!("generating {}", r.epi_count))?;
    ensure(r.kernel_count == Some(1), || format!("kernels {:?}", r.kernel_count))?;
    Ok("336 brute, 336 frobenius, 336 generating, 1 kernel".into())
}

fn symmetric(d: usize) -> PermGroup {
    let full: Vec<usize> = (1..=d).collect();
    PermGroup::from_generators(&[
        Permutation::from_cycles(&[[1, 2]], d).unwrap(),
        Permutation::from_cycles(&[full], d).unwrap(),
    ])
    .unwrap()
}

fn oracle_equivalence() -> Check {
    let mut total = 0;
    for (d, text) in [(4, include_str!("../../../fixtures/s4.tbl")), (5, include_str!("../../../fixtures/s5.tbl"))] {
        let table = CharacterTable64::parse(text).map_err(err)?;
        let classes = conjugacy_classes(&symmetric(d)).map_err(err)?;
        let map = match_classes(&table, &classes).map_err(err)?;
        let cs = classes.classes();
        for i in 0..cs.len() {
            for j in 0..cs.len() {
                for k in 0..cs.len() {
                    let brute = count_triples_bruteforce(&cs[i], &cs[j], &cs[k]).map_err(err)?;
                    let frob = table.frobenius_count(map[i], map[j], map[k]).map_err(err)?;
                    ensure(brute == frob, || format!("S{d} classes ({i},{j},{k}): brute {brute}, frobenius {frob}"))?;
                    total += 1;
                }
            }
        }
    }
    Ok(format!("{total} class triples agree"))
}

fn run(id: &str) -> Result<serde_json::Value, String> {
    let r = verify(id).map_err(err)?;
    let failed: Vec<String> = r.claims.iter().filter(|c| !c.pass).map(|c| c.claim.clone()).collect();
    ensure(failed.is_empty(), || format!("{id}: failed {failed:?}"))?;
    Ok(r.report)
}

fn pair_goldens() -> Check {
    let start = Instant::now();
    let v = run("ex5")?;
    ensure(v["verdict"] == "isomorphic", || "ex5 verdict".into())?;
    let v = run("ex6")?;
    ensure(v["verdict"] == "not-isomorphic", || "ex6 verdict".into())?;
    for k in 0..2 {
        ensure(v["dessins"][k]["order"] == 362880, || "ex6 orders".into())?;
    }
    let v = run("ex7:n=8,p=17,variant=swap")?;
    ensure(v["verdict"] == "isomorphic", || "ex7 swap verdict".into())?;
    let v = run("ex7:n=8,p=17,variant=noswap")?;
    ensure(v["verdict"] == "not-isomorphic", || "ex7 noswap verdict".into())?;
    let v = run("ex10:n=2")?;
    for k in 0..2 {
        ensure(v["dessins"][k]["aut"] == "G" && v["dessins"][k]["order"] == 362880, || "ex10 Aut ≠ S9".into())?;
    }
    let v = run("ex12:n=2")?;
    let fp = &v["fingerprints"];
    ensure(fp[0]["order"] == fp[1]["order"], || "ex12 orders differ".into())?;
    ensure(fp[0]["center_order"] == 2 && fp[1]["center_order"] == 1, || "ex12 centres".into())?;
    let v = run("ex13:n=3,p=13")?;
    let fp = &v["fingerprints"];
    ensure(fp[0]["order"] == 2184 && fp[1]["order"] == 2184, || "ex13 orders".into())?;
    ensure(fp[0]["center_order"] == 2 && fp[1]["center_order"] == 1, || "ex13 centres".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok("ex5, ex6, ex7 swap/noswap, ex10, ex12, ex13".into())
}

fn example4_suite() -> Check {
    for n in 3..=8u32 {
        let out = build_example4(n).map_err(err)?;
        let r = &out.report;
        let n64 = n as u64;
        ensure(r.order == 4 * n64 * n64, || format!("n={n}: |G| = {}", r.order))?;
        ensure(r.center_order == 2 * n64, || format!("n={n}: |Z| = {}", r.center_order))?;
        let [d1, d2] = &r.dessins;
        ensure(d1.abelian && !d2.abelian, || format!("n={n}: abelian flags"))?;
        ensure(d1.order == 2 * n64 * n64 && d2.order == 2 * n64 * n64, || format!("n={n}: subgroup orders"))?;
        let g = (n64 - 1) * (n64 - 1);
        for h in &out.hypermaps {
            ensure(h.genus().map_err(err)? == g, || format!("n={n}: Euler genus"))?;
        }
        ensure(out.walsh[0].is_multi_complete_bipartite(n as usize, 2), || format!("n={n}: W(H₁) ≠ 2K_{{n,n}}"))?;
        ensure(out.walsh[1].is_multi_cycle(n as usize, n as usize), || format!("n={n}: W(H₂) ≠ nC_{{2n}}"))?;
    }
    Ok("n = 3..8".into())
}

fn case4_suite() -> Check {
    let expected = [(1, "V4", "C4", 0), (2, "Q8", "C8", 2), (3, "V4×C3", "C12", 4), (6, "Q8×C3", "C24", 10)];
    for (d, a1, a2, genus) in expected {
        let r = build_example14(d).map_err(err)?;
        let names = (small_group_name(&r.fingerprints[0]), small_group_name(&r.fingerprints[1]));
        ensure(names == (a1.to_string(), a2.to_string()), || format!("d={d}: {names:?}"))?;
        ensure(r.genus == BigInt::from(genus), || format!("d={d}: genus {}", r.genus))?;
    }
    Ok("d = 1, 2, 3, 6".into())
}

fn congruence_suite() -> Check {
    for m in 3..=12u64 {
        let idx = gamma_index(m).map_err(err)?;
        let oracle = BigUint::from(sl2_order_bruteforce(m) / 2);
        ensure(idx == oracle, || format!("m={m}: {idx} ≠ {oracle}"))?;
    }
    for n in 1..=20u64 {
        let data = modular_dessin_data(n).map_err(err)?;
        let (aut, genus) = closed_forms(n);
        ensure(BigInt::from(data.aut_order.clone()) == aut, || format!("n={n}: |Aut| {}", data.aut_order))?;
        ensure(BigInt::from(data.genus.clone()) == genus, || format!("n={n}: genus {}", data.genus))?;
    }
    Ok("m = 3..12, n = 1..20".into())
}

fn closed_forms(n: u64) -> (BigInt, BigInt) {
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for p in (3..=n).filter(|&p| n.is_multiple_of(p) && (2..p).all(|q| p % q != 0)) {
        num *= p * p - 1;
        den *= p * p;
    }
    let aut = BigInt::from(4 * n * n * n) * &num / &den;
    let genus = BigInt::from((2 * n as i64 - 3) * (n * n) as i64) * num / den + 1;
    (aut, genus)
}

fn property_suites() -> Check {
    let mut dessins = 0;
    for id in GOLDEN_IDS {
        let v = run(id)?;
        let Some(list) = v["dessins"].as_array().or_else(|| v["pair"]["dessins"].as_array()) else { continue };
        for d in list {
            if !d["euler_genus"].is_null() {
                ensure(d["euler_genus"] == d["genus"], || format!("{id}: Euler genus ≠ RH genus"))?;
                dessins += 1;
            }
        }
    }

    let t5 = example5_triple().map_err(err)?;
    let s5 = t5.group().map_err(err)?;
    let h = regular_hypermap_from_triple(&s5, &t5.x, &t5.y).map_err(err)?;
    let base = h.genus().map_err(err)?;
    for role in Role::ALL {
        ensure(h.associate(role).genus().map_err(err)? == base, || format!("associate {role:?} changes genus"))?;
    }
    for h in build_example4(5).map_err(err)?.hypermaps {
        let base = h.genus().map_err(err)?;
        for role in Role::ALL {
            ensure(h.associate(role).genus().map_err(err)? == base, || format!("Example 4 associate {role:?}"))?;
        }
    }

    let triples = [example5_triple(), example10_triple(2), example12_triple(2)];
    let mut subtriples = 0;
    for t in triples {
        let t = t.map_err(err)?;
        let g = t.group().map_err(err)?;
        let h = index_two_subgroup(&g).map_err(err)?;
        let j = parity_classify(&t, |e| h.contains(e)).map_err(err)?;
        let inside: Vec<bool> = t.elements().iter().map(|e| h.contains(e)).collect();
        ensure(inside.iter().filter(|&&b| b).count() == 1 && inside[j], || "parity index not unique".into())?;
        ensure(parity_classify(&t, |_| true).is_err(), || "all-inside pattern accepted".into())?;
        if t.ty.l != 2 {
            continue;
        }
        for (which, pos) in [(Which::ContainsY, 1), (Which::ContainsZ, 2)] {
            let s = index2_subtriple(&t, which).map_err(err)?;
            let sub = s.group().map_err(err)?;
            let index = if j == pos { 2u32 } else { 1 };
            ensure(sub.order() * index == *g.order() && sub.is_subgroup_of(&g), || format!("{which:?}: index ≠ {index}"))?;
            subtriples += 1;
        }
    }
    let a5 = GeneratingTriple::from_pair(
        Permutation::parse("(12)(34)", 5).map_err(err)?,
        Permutation::parse("(135)", 5).map_err(err)?,
    )
    .map_err(err)?;
    ensure(index_two_subgroup(&a5.group().map_err(err)?).is_err(), || "A5 has no index-two subgroup".into())?;

    let mut groups: Vec<(String, PermGroup)> = vec![
        ("S4".into(), symmetric(4)),
        ("S5".into(), symmetric(5)),
        ("S6".into(), symmetric(6)),
        ("GL2(3)".into(), gl2_on_vectors(3).map_err(err)?),
    ];
    for p in [5, 7, 11, 13] {
        groups.push((format!("PGL2({p})"), MatGroupHandle::pgl2(p).map_err(err)?.group().clone()));
        groups.push((format!("PSL2({p})"), MatGroupHandle::psl2(p).map_err(err)?.group().clone()));
    }
    for n in 3..=8 {
        let g = Example4Group::new(n).map_err(err)?;
        let gens = [g.a(), g.b(), g.c()].map(|e| g.regular_permutation(&e));
        groups.push((format!("Ex4(n={n})"), PermGroup::from_generators(&gens).map_err(err)?));
    }
    for d in [1, 2, 3, 6] {
        groups.push((format!("Ex14(d={d})"), example14_group(d).map_err(err)?));
    }
    for (name, g) in &groups {
        let order = g.order_u64().unwrap_or(u64::MAX);
        if order > 5000 {
            continue;
        }
        let size = closure(g.identity(), g.generators()).len() as u64;
        ensure(size == order, || format!("{name}: BSGS {order}, closure {size}"))?;
    }
    Ok(format!("{dessins} dessins, {subtriples} subtriples, {} groups", groups.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("genus goldens", genus_goldens),
        ("counting golden", counting_golden),
        ("oracle equivalence", oracle_equivalence),
        ("pair-construction goldens", pair_goldens),
        ("Example 4 suite", example4_suite),
        ("Case-4 suite", case4_suite),
        ("congruence arithmetic", congruence_suite),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({ms} ms)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({ms} ms)", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
