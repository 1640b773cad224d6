//! Seeded generation of valid surgery words.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::invariant::OddPrime;

use super::ops::Summand;
use super::word::{BaseSpace, Role, Selector, SurfaceState, SurgeryStep, SurgeryWord};

#[derive(Clone, Copy, Debug)]
pub struct WordConfig {
    pub max_steps: usize,
    /// Steps that would push β past this bound are not proposed.
    pub max_beta: u64,
    /// Restrict to steps with a scheme-level realization.
    pub plus_only: bool,
    pub max_poly_layers: u32,
}

impl Default for WordConfig {
    fn default() -> Self {
        WordConfig {
            max_steps: 5,
            max_beta: 40,
            plus_only: false,
            max_poly_layers: 2,
        }
    }
}

fn selector_for(role: Role) -> Option<Selector> {
    Some(match role {
        Role::BaseNorth => Selector::BaseNorth,
        Role::BaseSouth => Selector::BaseSouth,
        Role::RibbonNorth(j) => Selector::RibbonNorth(j),
        Role::RibbonSouth(j) => Selector::RibbonSouth(j),
        Role::TwistA(j) => Selector::TwistA(j),
        Role::TwistB(j) => Selector::TwistB(j),
        Role::PolyVertex(j) => Selector::PolyVertex(j),
        Role::Step(_) => return None,
    })
}

fn random_selector(rng: &mut impl Rng, state: &SurfaceState) -> Selector {
    let n = state.points.len();
    let idx = rng.gen_range(0..n);
    // Mix role selectors with positional ones.
    match selector_for(state.points[idx].role) {
        Some(sel) if rng.gen_bool(0.75) => sel,
        _ => Selector::At(rng.gen_range(0..n as u32)),
    }
}

fn random_base(rng: &mut impl Rng, p: OddPrime, cfg: &WordConfig) -> BaseSpace {
    let i = rng.gen_range(1..p.get());
    match rng.gen_range(0..5) {
        0 => BaseSpace::M1Free,
        1 => BaseSpace::Sphere(i),
        2 => BaseSpace::KleinFree(i),
        3 => BaseSpace::ProjPlaneOne(i),
        _ => BaseSpace::Poly {
            n: rng.gen_range(1..=cfg.max_poly_layers.max(1)),
            i,
        },
    }
}

fn random_step(rng: &mut impl Rng, state: &SurfaceState, cfg: &WordConfig) -> SurgeryStep {
    let p = state.p();
    let mut kinds = vec![0, 1, 1];
    if !state.points.is_empty() {
        kinds.extend([2, 2, 3]);
    }
    if !cfg.plus_only {
        kinds.extend([4, 5, 6]);
    }
    match *kinds.choose(rng).expect("non-empty") {
        0 => {
            if rng.gen_bool(0.5) {
                SurgeryStep::ConnSum(Summand::Orientable(rng.gen_range(1..=2)))
            } else {
                SurgeryStep::ConnSum(Summand::NonOrientable(rng.gen_range(1..=2)))
            }
        }
        1 => SurgeryStep::PlusRibbon(rng.gen_range(1..p.get())),
        2 => SurgeryStep::PlusTwisted(random_selector(rng, state)),
        3 => SurgeryStep::PlusFmb(random_selector(rng, state)),
        4 => SurgeryStep::MinusRibbon,
        5 => SurgeryStep::MinusTwisted,
        _ => SurgeryStep::PlusMbf,
    }
}

/// A random word whose every step is admissible. Proposals that fail or that
/// exceed the β bound are redrawn a bounded number of times, so the word may
/// be shorter than `max_steps`.
pub fn random_word(rng: &mut impl Rng, p: OddPrime, cfg: &WordConfig) -> SurgeryWord {
    let base = random_base(rng, p, cfg);
    let mut word = SurgeryWord::new(p, base);
    let mut state = SurfaceState::base(p, base).expect("random bases are valid");
    let len = rng.gen_range(0..=cfg.max_steps);
    for _ in 0..len {
        for _attempt in 0..20 {
            let step = random_step(rng, &state, cfg);
            if let Ok(next) = state.apply(&step, word.steps.len()) {
                if next.record.beta <= cfg.max_beta {
                    word.steps.push(step);
                    state = next;
                    break;
                }
            }
        }
    }
    word
}

/// `count` words from a fixed seed.
pub fn corpus(seed: u64, p: OddPrime, count: usize, cfg: &WordConfig) -> Vec<SurgeryWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_word(&mut rng, p, cfg)).collect()
}
