//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use equisurf::invariant::{canonicalize_rotations, InvariantRecord, OddPrime, RotationMultiset};
use equisurf::orbit::{orbit_count, orbit_partition, Codec, SurfaceModel, DEFAULT_BUDGET};
use equisurf::oracle::realize;
use equisurf::surgery::ops::twisted_split;
use equisurf::surgery::random::{random_word, WordConfig};
use equisurf::surgery::{
    apply_fmb, apply_mbf, apply_minus_ribbon, apply_minus_twisted, apply_plus_ribbon, apply_plus_twisted, atlas,
    evaluate, normalize, parse, print, trace, Family, FamilyClass, Orientability, Summand, SurgeryStep, SurgeryWord,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u32; 3] = [3, 5, 7];
const LIMIT_ORBITS: Duration = Duration::from_secs(60);
const LIMIT_EULER: Duration = Duration::from_secs(5);
const LIMIT_DING: Duration = Duration::from_secs(5);
const LIMIT_AGREEMENT: Duration = Duration::from_secs(600);
const LIMIT_REWRITES: Duration = Duration::from_secs(1);
const LIMIT_PROPERTIES: Duration = Duration::from_secs(120);
/// Random words per prime in the oracle/calculus comparison.
const AGREEMENT_WORDS: u64 = 500;
/// Largest β covered by the Euler sweep.
const EULER_BETA_MAX: u64 = 40;

type Check = Result<String, String>;

fn p(n: u32) -> OddPrime {
    OddPrime::new(n).unwrap()
}

fn words(q: OddPrime, count: u64, plus_only: bool, seed: u64) -> Vec<SurgeryWord> {
    let cfg = WordConfig { plus_only, ..WordConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_word(&mut rng, q, &cfg)).collect()
}

fn orbit_counts() -> Check {
    let mut runs = 0;
    for q in PRIMES {
        let half = (q as usize - 1) / 2;
        let mut expected: Vec<(SurfaceModel, usize)> = vec![(SurfaceModel::ClosedNonorientable(2), half)];
        expected.extend((3..=8).map(|r| (SurfaceModel::ClosedNonorientable(r), 1)));
        expected.extend((1..=3).map(|g| (SurfaceModel::ClosedOrientable(g), 1)));
        // A boundary model with m crosscaps is the case n = m - 1.
        expected.push((SurfaceModel::Boundary(1), half));
        expected.push((SurfaceModel::Boundary(2), q as usize - 1));
        expected.push((SurfaceModel::Boundary(3), half + 1));
        expected.push((SurfaceModel::Boundary(4), half + 1));
        for (model, want) in expected {
            let got = orbit_count(model, p(q), DEFAULT_BUDGET).map_err(|e| format!("{model} p={q}: {e}"))?;
            if got.nonzero_orbits != want {
                return Err(format!("{model} p={q}: {} orbits, expected {want}", got.nonzero_orbits));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} model/prime pairs exact"))
}

/// Every family member with β <= `beta_max`, enumerated from the formulas
/// with loose loop bounds.
fn family_members(q: OddPrime, beta_max: u64) -> BTreeSet<FamilyClass> {
    let mut out = BTreeSet::new();
    let b = beta_max + 1;
    let mut push = |family| {
        if let Ok(c) = FamilyClass::new(q, family) {
            if c.beta() <= beta_max {
                out.insert(c);
            }
        }
    };
    for a in 0..b {
        push(Family::MFree { g: a });
        push(Family::NFree { r: a });
        for c in 0..b {
            push(Family::Sph { k: a, g: c });
            push(Family::NSph { k: a, r: c });
            push(Family::NProj { k: a, r: c });
            for n in 1..b {
                push(Family::Poly { n, k: a, g: c });
            }
        }
    }
    out
}

fn euler_sweep() -> Check {
    let mut checked = 0;
    for q in PRIMES {
        let members = family_members(p(q), EULER_BETA_MAX);
        for c in &members {
            let (f, beta) = (c.fixed_points() as i64, c.beta() as i64);
            if (f - (2 - beta)).rem_euclid(q as i64) != 0 {
                return Err(format!("{c} at p={q}: F={f}, beta={beta}"));
            }
        }
        let listed: BTreeSet<FamilyClass> = atlas(p(q), EULER_BETA_MAX).into_iter().map(|r| r.class).collect();
        if listed != members {
            return Err(format!("atlas at p={q} lists {} members, formulas give {}", listed.len(), members.len()));
        }
        checked += members.len();
    }
    Ok(format!("{checked} family members, 0 violations"))
}

fn ding_separation() -> Check {
    let q = p(3);
    let tuple = |w: &str| -> Result<Vec<u32>, String> {
        let word = parse(w, q).map_err(|e| e.to_string())?;
        let rec = realize(&word).and_then(|r| r.record()).and_then(|r| r.canonical()).map_err(|e| e.to_string())?;
        rec.rotations.ok_or_else(|| format!("{w}: no rotation data"))
    };
    let poly = tuple("Poly(2,1)")?;
    let sph = tuple("S(1) +R(1) +R(1)")?;
    if poly != [1; 6] || sph != [1, 1, 1, 2, 2, 2] {
        return Err(format!("Poly2 {poly:?}, Sph4[6] {sph:?}"));
    }
    let b = RotationMultiset::new(sph.clone(), true, q).unwrap();
    for u in q.units() {
        let a = RotationMultiset::new(poly.clone(), true, q).unwrap().twist(u, q);
        if a == b {
            return Err(format!("twist by {u} identifies the tuples"));
        }
    }
    Ok(format!("Poly2 {poly:?} vs Sph4[6] {sph:?}, distinct under all twists"))
}

fn agreement() -> Check {
    let mut total = 0;
    for q in [3, 5] {
        for w in words(p(q), AGREEMENT_WORDS, true, 0xacce_0000 + q as u64) {
            let want = evaluate(&w).and_then(|r| r.canonical()).map_err(|e| format!("{}: {e}", print(&w)))?;
            let got = realize(&w)
                .and_then(|r| r.record())
                .and_then(|r| r.canonical())
                .map_err(|e| format!("{}: oracle: {e}", print(&w)))?;
            if got != want {
                return Err(format!("{} at p={q}: calculus {want}, oracle {got}", print(&w)));
            }
            total += 1;
        }
    }
    Ok(format!("{total} words, bit-exact"))
}

fn rewrites() -> Check {
    let mut checked = 0;
    for q in PRIMES {
        let cases = [
            ("Poly(1,1) +TR(poly-vertex:1)", "S(1) +R(1)", Family::Sph { k: 1, g: 0 }),
            ("N2free(1) +R(1)", "S(1) #N(2)", Family::NSph { k: 0, r: 2 }),
            ("N1[1](1) +TR(base-north)", "S(1) #N(1)", Family::NSph { k: 0, r: 1 }),
            ("Poly(1,1) #N(1)", "N1[1](1) +R(1)", Family::NProj { k: 1, r: 0 }),
        ];
        for (lhs, rhs, family) in cases {
            let class = FamilyClass::new(p(q), family).unwrap();
            let mut records = Vec::new();
            for side in [lhs, rhs] {
                let w = parse(side, p(q)).map_err(|e| format!("{side}: {e}"))?;
                let got = normalize(&w).map_err(|e| format!("{side}: {e}"))?;
                if got.unique() != Some(class) {
                    return Err(format!("{side} at p={q}: normalized to {got:?}, expected {class}"));
                }
                records.push(evaluate(&w).and_then(|r| r.canonical()).map_err(|e| e.to_string())?);
            }
            let target = class.record();
            for rec in &records {
                if rec.without_rotations() != target.without_rotations() {
                    return Err(format!("p={q}: {rec} vs family record {target}"));
                }
            }
            // Rotations are a family invariant only at p = 3.
            if q == 3 && (records[0] != records[1] || records[0] != target) {
                return Err(format!("p=3 {lhs} / {rhs}: {} vs {} vs {target}", records[0], records[1]));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} identities across p in {PRIMES:?}"))
}

/// Records visited by random words, with their primes.
fn corpus() -> Vec<InvariantRecord> {
    let mut out = Vec::new();
    for q in PRIMES {
        for w in words(p(q), 200, false, 0x5eed_0000 + q as u64) {
            out.extend(trace(&w).unwrap().into_iter().map(|s| s.record));
        }
    }
    out
}

fn properties(lines: &mut Vec<String>) -> Check {
    let mut failed = Vec::new();
    let mut sub = |name: &str, r: Check| {
        let (tag, text) = match &r {
            Ok(t) => ("PASS", t.clone()),
            Err(t) => ("FAIL", t.clone()),
        };
        lines.push(format!("    {tag} 6.{name}: {text}"));
        if r.is_err() {
            failed.push(name.to_string());
        }
    };
    let records = corpus();

    sub("ribbon-round-trip", {
        let mut per_prime = std::collections::BTreeMap::new();
        let mut first = None;
        for rec in &records {
            for i in rec.p.units() {
                let back = apply_plus_ribbon(rec, i).and_then(|r| apply_minus_ribbon(&r)).map(|(r, _)| r);
                let entry = per_prime.entry(rec.p.get()).or_insert((0, 0));
                entry.0 += 1;
                if back.as_ref().ok() != Some(rec) {
                    entry.1 += 1;
                    first.get_or_insert(format!("{rec} +R({i}) -R = {back:?}"));
                }
            }
        }
        let counts: Vec<String> =
            per_prime.iter().map(|(q, (n, bad))| format!("p={q}: {bad}/{n} not exact")).collect();
        match first {
            None => Ok(counts.join(", ")),
            Some(e) => Err(format!("{}; e.g. {e}; {}", counts.join(", "), ribbon_collision())),
        }
    });

    sub("twisted-round-trip", {
        let mut n = 0;
        let mut bad = None;
        for rec in &records {
            let Some(rot) = &rec.rotations else { continue };
            for (k, &v) in rot.iter().enumerate() {
                let (h, _) = twisted_split(rec.p, v);
                let h = if rec.orientable { h } else { rec.p.fold(h) };
                let back = apply_plus_twisted(rec, k).and_then(|r| apply_minus_twisted(&r, Some(h)));
                n += 1;
                if back.as_ref().ok() != Some(rec) {
                    bad.get_or_insert(format!("{rec} at {k}: {back:?}"));
                }
            }
        }
        bad.map_or(Ok(format!("{n} round trips exact")), Err)
    });

    sub("band-round-trip", {
        let mut n = 0;
        let mut bad = None;
        for rec in records.iter().filter(|r| r.fixed_points > 0) {
            let back = apply_fmb(rec, 0).and_then(|r| apply_mbf(&r));
            n += 1;
            // Rotation data at a recreated fixed point is not recoverable, and
            // an undecided orientability is a placeholder.
            let ok = match &back {
                Ok((b, Orientability::Known)) => {
                    (b.beta, b.fixed_points, b.orientable) == (rec.beta, rec.fixed_points, rec.orientable)
                }
                Ok((b, Orientability::Unknown)) => (b.beta, b.fixed_points) == (rec.beta, rec.fixed_points),
                Err(_) => false,
            };
            if !ok {
                bad.get_or_insert(format!("{rec}: {back:?}"));
            }
        }
        bad.map_or(Ok(format!("{n} round trips")), Err)
    });

    sub("ribbon-commutes-with-sum", {
        let mut n = 0;
        let mut bad = None;
        for q in PRIMES {
            let mut rng = ChaCha8Rng::seed_from_u64(0xc0_0000 + q as u64);
            for w in words(p(q), 200, false, 0xc0_1000 + q as u64) {
                let i = rng.gen_range(1..q);
                let s = if rng.gen() { Summand::Orientable(rng.gen_range(0..3)) } else { Summand::NonOrientable(rng.gen_range(1..3)) };
                let a = w.clone().then(SurgeryStep::PlusRibbon(i)).then(SurgeryStep::ConnSum(s));
                let b = w.then(SurgeryStep::ConnSum(s)).then(SurgeryStep::PlusRibbon(i));
                let same_record = evaluate(&a).ok() == evaluate(&b).ok();
                let same_class = matches!((normalize(&a), normalize(&b)), (Ok(x), Ok(y)) if x.candidates() == y.candidates());
                n += 1;
                if !(same_record && same_class) {
                    bad.get_or_insert(format!("{} vs {}", print(&a), print(&b)));
                }
            }
        }
        bad.map_or(Ok(format!("{n} word pairs agree on record and normal form")), Err)
    });

    sub("canonicalize", {
        let mut rng = ChaCha8Rng::seed_from_u64(0xca40);
        let mut n = 0;
        let mut bad = None;
        for q in PRIMES.into_iter().chain([11, 13]) {
            let q = p(q);
            for _ in 0..300 {
                let len = rng.gen_range(0..10);
                let entries: Vec<u32> = (0..len).map(|_| rng.gen_range(1..q.get())).collect();
                let ms = RotationMultiset::new(entries, rng.gen(), q).unwrap();
                let c = canonicalize_rotations(&ms, q).unwrap();
                let idempotent = canonicalize_rotations(&c, q).unwrap() == c;
                let invariant = q.units().all(|u| canonicalize_rotations(&ms.twist(u, q), q).unwrap() == c);
                n += 1;
                if !(idempotent && invariant) {
                    bad.get_or_insert(format!("{:?} at p={q}", ms.entries()));
                }
            }
        }
        bad.map_or(Ok(format!("{n} multisets idempotent and twist-invariant")), Err)
    });

    sub("orbit-schedule-independence", {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0b17);
        let mut n = 0;
        let mut bad = None;
        for (model, q) in [
            (SurfaceModel::ClosedNonorientable(2), 7),
            (SurfaceModel::ClosedNonorientable(4), 5),
            (SurfaceModel::ClosedOrientable(2), 5),
            (SurfaceModel::Boundary(2), 7),
            (SurfaceModel::Boundary(3), 5),
        ] {
            let gens = model.generators(p(q)).unwrap();
            let rank = model.rank();
            let base = orbit_partition(&gens, rank, p(q), DEFAULT_BUDGET, None).unwrap();
            let mut seeds: Vec<u64> = (1..(Codec { p: q, n: rank }).states() as u64).collect();
            for _ in 0..10 {
                seeds.shuffle(&mut rng);
                n += 1;
                if orbit_partition(&gens, rank, p(q), DEFAULT_BUDGET, Some(&seeds)).unwrap() != base {
                    bad.get_or_insert(format!("{model} p={q}"));
                }
            }
        }
        bad.map_or(Ok(format!("{n} shuffled runs match")), Err)
    });

    if failed.is_empty() {
        Ok("all suites hold".into())
    } else {
        Err(format!("failing: {}", failed.join(", ")))
    }
}

/// Two records that +R sends to the same record, so no -R can undo both.
fn ribbon_collision() -> String {
    let q = p(5);
    let a = evaluate(&parse("S(1) +R(1)", q).unwrap()).unwrap();
    let b = evaluate(&parse("S(1) +R(2)", q).unwrap()).unwrap();
    let (a2, b1) = (apply_plus_ribbon(&a, 2).unwrap(), apply_plus_ribbon(&b, 1).unwrap());
    if a != b && a2 == b1 {
        format!("+R is not injective: {a} +R(2) = {b} +R(1) = {a2}")
    } else {
        "no +R collision found".into()
    }
}

fn run(n: u32, name: &str, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let r = f();
    let took = start.elapsed();
    let r = match r {
        Ok(t) if took > limit => Err(format!("{t}, but took {:.2?} (limit {limit:?})", took)),
        r => r,
    };
    let (tag, text) = match &r {
        Ok(t) => ("PASS", t),
        Err(t) => ("FAIL", t),
    };
    println!("{tag} criterion {n} {name} [{:.2?} / {limit:?}]: {text}", took);
    r.is_ok()
}

fn main() {
    let mut ok = true;
    ok &= run(1, "orbit counts", LIMIT_ORBITS, orbit_counts);
    ok &= run(2, "euler constraint sweep", LIMIT_EULER, euler_sweep);
    ok &= run(3, "ding tuple separation", LIMIT_DING, ding_separation);
    ok &= run(4, "oracle/calculus agreement", LIMIT_AGREEMENT, agreement);
    ok &= run(5, "rewrite identities", LIMIT_REWRITES, rewrites);
    let mut lines = Vec::new();
    ok &= run(6, "property suites", LIMIT_PROPERTIES, || properties(&mut lines));
    for l in lines {
        println!("{l}");
    }
    if !ok {
        std::process::exit(1);
    }
}
