//! Orbit engine against a separate union-find computation, plus schedule
//! independence.

use equisurf::invariant::OddPrime;
use equisurf::orbit::{
    crosscap_slide_matrix, dehn_twist_matrix, orbit_of_with, orbit_partition, Codec, CrosscapBasis,
    GeneratorMatrix, SurfaceModel, DEFAULT_BUDGET,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn p(n: u32) -> OddPrime {
    OddPrime::new(n).unwrap()
}

/// A generator acting on coefficient vectors over the full crosscap basis.
#[derive(Clone, Copy)]
enum Move {
    T(usize, usize),
    Y(usize, usize),
    Negate,
}

/// Image of `Σ x_k α_k`, indices 0-based, no relation imposed.
fn act(m: Move, x: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; x.len()];
    for (k, &c) in x.iter().enumerate() {
        match m {
            Move::T(i, j) if k == i => {
                out[i] += 2 * c;
                out[j] += c;
            }
            Move::T(i, j) if k == j => out[i] -= c,
            Move::Y(i, _) if k == i => out[i] -= c,
            Move::Y(i, j) if k == j => {
                out[i] += 2 * c;
                out[j] += c;
            }
            Move::Negate => out[k] -= c,
            _ => out[k] += c,
        }
    }
    out
}

/// Union-find orbit partition. `closed` imposes `α_r = -(α_1 + … + α_{r-1})`
/// by lifting with a zero last coefficient and subtracting it back out.
fn union_find(q: u32, crosscaps: usize, closed: bool, moves: &[Move]) -> Vec<(u64, u64)> {
    let n = if closed { crosscaps - 1 } else { crosscaps };
    let codec = Codec { p: q, n };
    let total = codec.states() as u64;
    let mut parent: Vec<u64> = (0..total).collect();
    fn find(parent: &mut [u64], mut x: u64) -> u64 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    let mut v = vec![0u32; n];
    for code in 1..total {
        codec.decode(code, &mut v);
        let mut lifted: Vec<i64> = v.iter().map(|&c| c as i64).collect();
        if closed {
            lifted.push(0);
        }
        for &m in moves {
            let img = act(m, &lifted);
            let reduced: Vec<u32> = if closed {
                let last = img[n];
                img[..n].iter().map(|&c| (c - last).rem_euclid(q as i64) as u32).collect()
            } else {
                img.iter().map(|&c| c.rem_euclid(q as i64) as u32).collect()
            };
            let (a, b) = (find(&mut parent, code), find(&mut parent, codec.encode(&reduced)));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    let mut sizes = std::collections::BTreeMap::new();
    for code in 1..total {
        *sizes.entry(find(&mut parent, code)).or_insert(0u64) += 1;
    }
    let mut out: Vec<(u64, u64)> = sizes.into_iter().collect();
    out.sort_unstable();
    out
}

fn all_moves(r: usize, boundary: bool) -> Vec<Move> {
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..r {
            if i != j {
                out.push(Move::T(i, j));
                out.push(Move::Y(i, j));
            }
        }
    }
    if boundary {
        out.push(Move::Negate);
    }
    out
}

#[test]
fn engine_matches_union_find() {
    for q in [3, 5, 7] {
        for r in 2..=5 {
            let model = SurfaceModel::ClosedNonorientable(r);
            if (Codec { p: q, n: model.rank() }).states() > 20_000 {
                continue;
            }
            let gens = model.generators(p(q)).unwrap();
            let engine = orbit_partition(&gens, model.rank(), p(q), DEFAULT_BUDGET, None).unwrap();
            assert_eq!(engine, union_find(q, r, true, &all_moves(r, false)), "{model} p={q}");
        }
        for m in 1..=3 {
            let model = SurfaceModel::Boundary(m);
            let gens = model.generators(p(q)).unwrap();
            let engine = orbit_partition(&gens, model.rank(), p(q), DEFAULT_BUDGET, None).unwrap();
            assert_eq!(engine, union_find(q, m, false, &all_moves(m, true)), "{model} p={q}");
        }
    }
}

#[test]
fn crosscap_slide_joins_diagonal_vectors() {
    // Closed N₃ at p = 5. Under T₁,₂ alone (1,1) and (2,2) lie in different
    // orbits; adding Y₁,₃ joins them.
    let q = 5;
    let basis = CrosscapBasis::Closed { r: 3 };
    let t12 = dehn_twist_matrix(1, 2, basis, p(q)).unwrap();
    let y13 = crosscap_slide_matrix(1, 3, basis, p(q)).unwrap();

    let only_t = union_find(q, 3, true, &[Move::T(0, 1)]);
    let with_y = union_find(q, 3, true, &[Move::T(0, 1), Move::Y(0, 2)]);
    assert_eq!(only_t.len(), 8);
    assert_eq!(with_y.len(), 1);

    let rep = |v: &[u32], gens: &[GeneratorMatrix]| orbit_of_with(v, gens, p(q), DEFAULT_BUDGET).unwrap();
    let gens_t = [t12.clone()];
    let gens_ty = [t12, y13];
    assert_ne!(rep(&[1, 1], &gens_t), rep(&[2, 2], &gens_t));
    assert_eq!(rep(&[1, 1], &gens_ty), rep(&[2, 2], &gens_ty));
    let full = SurfaceModel::ClosedNonorientable(3).generators(p(q)).unwrap();
    assert_eq!(rep(&[1, 1], &full), rep(&[2, 2], &full));

    // Twists alone already act transitively.
    let pairs = [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)];
    let twists: Vec<GeneratorMatrix> =
        pairs.iter().map(|&(i, j)| dehn_twist_matrix(i, j, basis, p(q)).unwrap()).collect();
    assert_eq!(rep(&[1, 1], &twists), rep(&[2, 2], &twists));
    let moves: Vec<Move> = pairs.iter().map(|&(i, j)| Move::T(i - 1, j - 1)).collect();
    assert_eq!(union_find(q, 3, true, &moves).len(), 1);
}

#[test]
fn partitions_are_schedule_independent() {
    let cases = [
        (SurfaceModel::ClosedNonorientable(2), 7),
        (SurfaceModel::ClosedNonorientable(4), 5),
        (SurfaceModel::ClosedOrientable(2), 3),
        (SurfaceModel::Boundary(2), 5),
        (SurfaceModel::Boundary(3), 3),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (model, q) in cases {
        let gens = model.generators(p(q)).unwrap();
        let n = model.rank();
        let base = orbit_partition(&gens, n, p(q), DEFAULT_BUDGET, None).unwrap();
        let total: u64 = base.iter().map(|&(_, s)| s).sum();
        assert_eq!(total + 1, Codec { p: q, n }.states() as u64);
        let mut seeds: Vec<u64> = (1..total + 1).collect();
        for _ in 0..10 {
            seeds.shuffle(&mut rng);
            let shuffled = orbit_partition(&gens, n, p(q), DEFAULT_BUDGET, Some(&seeds)).unwrap();
            assert_eq!(shuffled, base, "{model} p={q}");
        }
    }
}

#[test]
fn generators_preserve_representatives() {
    let q = p(5);
    let model = SurfaceModel::Boundary(2);
    let gens = model.generators(q).unwrap();
    let mut w = vec![0u32; 2];
    for a in 0..5 {
        for b in 0..5 {
            if (a, b) == (0, 0) {
                continue;
            }
            let v = [a, b];
            let rep = orbit_of_with(&v, &gens, q, DEFAULT_BUDGET).unwrap();
            for g in &gens {
                assert!(g.is_invertible(q));
                g.apply(&v, q, &mut w);
                assert_eq!(orbit_of_with(&w, &gens, q, DEFAULT_BUDGET).unwrap(), rep);
            }
        }
    }
}
