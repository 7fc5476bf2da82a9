//! Pools of homomorphisms into small symmetric groups.
//!
//! A pool holds, per degree, assignments of permutations to generators
//! under which every relator evaluates to the identity. A word mapping to a
//! non-identity permutation under any pool entry is certifiably
//! nontrivial. Degrees where full enumeration over the relator-constrained
//! generators is affordable are enumerated outright; larger degrees are
//! filled by seeded sampling, so pools are deterministic for a fixed
//! configuration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::certificate::NontrivialCert;
use super::perm::Perm;
use super::GroupPresentation;
use crate::lang::{Letter, Word};

/// Degrees above this use sampling rather than enumeration of the
/// constrained-generator tuples.
const EXHAUSTIVE_TUPLE_BUDGET: u64 = 600_000;

#[derive(Clone, Copy, Debug)]
pub struct PoolConfig {
    pub max_degree: usize,
    pub per_degree_cap: usize,
    pub sample_attempts: usize,
    pub seed: u64,
}

impl Default for PoolConfig {
    fn default() -> Self {
        PoolConfig {
            max_degree: 6,
            per_degree_cap: 160,
            sample_attempts: 40_000,
            seed: 0x9e3779b9,
        }
    }
}

/// Relator-respecting generator images, grouped by degree.
#[derive(Clone, Debug)]
pub struct QuotientPool {
    homs: Vec<(usize, Vec<(char, Perm)>)>,
}

impl QuotientPool {
    pub fn build(presentation: &GroupPresentation, config: PoolConfig) -> Self {
        let alphabet = &presentation.alphabet;
        let generators = &presentation.generators;
        let mut constrained: Vec<char> = Vec::new();
        for r in &presentation.relators {
            for &l in r.letters() {
                let (g, _) = alphabet.generator_of(l).expect("paired");
                if !constrained.contains(&g) {
                    constrained.push(g);
                }
            }
        }
        constrained.sort_unstable();
        let free: Vec<char> = generators
            .iter()
            .copied()
            .filter(|g| !constrained.contains(g))
            .collect();

        let mut homs = Vec::new();
        for degree in 2..=config.max_degree {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (degree as u64) << 8);
            let mut kept = 0usize;
            let push = |tuple: Vec<(char, Perm)>,
                        homs: &mut Vec<(usize, Vec<(char, Perm)>)>,
                        rng: &mut ChaCha8Rng| {
                // Two flavors per constrained tuple: free generators killed,
                // and free generators random. Both keep relators at id.
                if free.is_empty() {
                    homs.push((degree, tuple));
                    return;
                }
                let mut killed = tuple.clone();
                let mut sampled = tuple;
                for &g in &free {
                    killed.push((g, Perm::identity(degree)));
                    sampled.push((g, random_perm(degree, rng)));
                }
                homs.push((degree, killed));
                homs.push((degree, sampled));
            };

            let all = Perm::all(degree);
            let tuple_count = (all.len() as u64).checked_pow(constrained.len() as u32);
            if tuple_count.is_some_and(|c| c <= EXHAUSTIVE_TUPLE_BUDGET) {
                // Enumerate; thin evenly to the cap afterwards.
                let mut valid = Vec::new();
                let mut indices = vec![0usize; constrained.len()];
                loop {
                    let tuple: Vec<(char, Perm)> = constrained
                        .iter()
                        .zip(&indices)
                        .map(|(&g, &i)| (g, all[i].clone()))
                        .collect();
                    if satisfies_relators(presentation, degree, &tuple)
                        && !tuple.iter().all(|(_, p)| p.is_identity())
                    {
                        valid.push(tuple);
                    }
                    let mut pos = indices.len();
                    loop {
                        if pos == 0 {
                            break;
                        }
                        pos -= 1;
                        indices[pos] += 1;
                        if indices[pos] < all.len() {
                            break;
                        }
                        indices[pos] = 0;
                    }
                    if indices.iter().all(|&i| i == 0) {
                        break;
                    }
                }
                let stride = (valid.len() / config.per_degree_cap).max(1);
                for tuple in valid
                    .into_iter()
                    .step_by(stride)
                    .take(config.per_degree_cap)
                {
                    push(tuple, &mut homs, &mut rng);
                    kept += 1;
                }
            } else {
                for _ in 0..config.sample_attempts {
                    if kept >= config.per_degree_cap {
                        break;
                    }
                    let tuple: Vec<(char, Perm)> = constrained
                        .iter()
                        .map(|&g| (g, random_perm(degree, &mut rng)))
                        .collect();
                    if satisfies_relators(presentation, degree, &tuple) {
                        push(tuple, &mut homs, &mut rng);
                        kept += 1;
                    }
                }
            }
            let _ = kept;
        }
        QuotientPool { homs }
    }

    pub fn len(&self) -> usize {
        self.homs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.homs.is_empty()
    }

    /// First pool entry whose image of `word` is non-identity.
    pub fn find_witness(
        &self,
        presentation: &GroupPresentation,
        word: &Word,
    ) -> Option<NontrivialCert> {
        for (degree, images) in &self.homs {
            if !eval(presentation, word.letters(), images, *degree).is_identity() {
                return Some(NontrivialCert::FiniteQuotient {
                    degree: *degree,
                    images: images.clone(),
                });
            }
        }
        None
    }
}

fn satisfies_relators(
    presentation: &GroupPresentation,
    degree: usize,
    images: &[(char, Perm)],
) -> bool {
    presentation
        .relators
        .iter()
        .all(|r| eval(presentation, r.letters(), images, degree).is_identity())
}

fn eval(
    presentation: &GroupPresentation,
    letters: &[Letter],
    images: &[(char, Perm)],
    degree: usize,
) -> Perm {
    let alphabet = &presentation.alphabet;
    let mut acc = Perm::identity(degree);
    for &l in letters {
        let (g, inverted) = alphabet.generator_of(l).expect("paired");
        let img = match images.iter().find(|(c, _)| *c == g) {
            Some((_, p)) => p.clone(),
            None => Perm::identity(degree),
        };
        let factor = if inverted { img.inverse() } else { img };
        acc = acc.compose(&factor);
    }
    acc
}

fn random_perm(degree: usize, rng: &mut ChaCha8Rng) -> Perm {
    let mut mapping: Vec<u8> = (0..degree as u8).collect();
    for i in (1..degree).rev() {
        let j = rng.gen_range(0..=i);
        mapping.swap(i, j);
    }
    Perm::new(mapping).unwrap()
}
