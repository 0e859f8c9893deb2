//! Exact chain-rule sampling from a measure, and Wilson's algorithm for
//! spanning-tree measures.
//!
//! Randomness comes from ChaCha8 seeded with a `u64`. The chain-rule draw
//! compares one `u64` against exact conditional cut points, so a sample
//! depends only on the seed and the measure.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphs::ConductanceGraph;
use crate::linalg::{rational_to_f64, Coloring, Rational};
use crate::measure::{KDetMeasure, MarginalQuery};

#[derive(Clone, Debug)]
pub struct SamplerState {
    seed: u64,
    rng: ChaCha8Rng,
}

impl SamplerState {
    pub fn new(seed: u64) -> Self {
        SamplerState {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent state for a parallel worker: same seed, separate stream.
    pub fn fork(&self, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream + 1);
        SamplerState { seed: self.seed, rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Conditionals after one prefix, with integer cut points on `[0, 2^64]`.
#[derive(Clone, Debug)]
struct Node {
    conditionals: Vec<Rational>,
    cuts: Vec<u128>,
}

/// Chain-rule sampler with conditionals cached per prefix.
#[derive(Debug)]
pub struct ChainSampler<'a> {
    m: &'a KDetMeasure,
    cache: HashMap<Vec<usize>, Node>,
}

impl<'a> ChainSampler<'a> {
    pub fn new(m: &'a KDetMeasure) -> Self {
        ChainSampler {
            m,
            cache: HashMap::new(),
        }
    }

    fn node(&mut self, prefix: &[usize]) -> Result<&Node> {
        if !self.cache.contains_key(prefix) {
            let node = conditionals(self.m, prefix)?;
            self.cache.insert(prefix.to_vec(), node);
        }
        Ok(&self.cache[prefix])
    }

    pub fn sample(&mut self, s: &mut SamplerState) -> Result<Coloring> {
        self.sample_traced(s).map(|(x, _)| x)
    }

    /// Also returns the conditional used at each step.
    pub fn sample_traced(&mut self, s: &mut SamplerState) -> Result<(Coloring, Vec<Rational>)> {
        let n = self.m.n();
        let mut prefix = Vec::with_capacity(n);
        let mut used = Vec::with_capacity(n);
        for _ in 0..n {
            let r = s.rng.gen::<u64>() as u128;
            let node = self.node(&prefix)?;
            let j = node.cuts.iter().position(|&c| r < c).expect("last cut is 2^64");
            used.push(node.conditionals[j].clone());
            prefix.push(j);
        }
        Ok((Coloring::from_zero_based(prefix), used))
    }
}

fn conditionals(m: &KDetMeasure, prefix: &[usize]) -> Result<Node> {
    let label = || Coloring::from_zero_based(prefix.to_vec()).to_string();
    let mut pairs: Vec<(usize, usize)> = prefix.iter().enumerate().map(|(p, &c)| (p + 1, c + 1)).collect();
    let den = m.marginal_prob(&MarginalQuery::new(pairs.clone()))?;
    if den.is_zero() {
        return Err(Error::ZeroDenominator { prefix: label() });
    }
    let t = prefix.len() + 1;
    pairs.push((t, 0));
    let mut conditionals = Vec::with_capacity(m.k());
    for j in 1..=m.k() {
        pairs[t - 1].1 = j;
        let c = m.marginal_prob(&MarginalQuery::new(pairs.clone()))? / &den;
        if c.is_negative() {
            return Err(Error::NegativeConditional { prefix: label() });
        }
        conditionals.push(c);
    }
    let scale = BigInt::one() << 64u32;
    let mut cum = Rational::zero();
    let mut cuts = Vec::with_capacity(m.k());
    for c in &conditionals {
        cum += c;
        let x = &cum * Rational::from_integer(scale.clone());
        let (q, r) = x.numer().div_rem(x.denom());
        let ceil = if r.is_zero() { q } else { q + 1 };
        cuts.push(ceil.to_u128().unwrap_or(u128::MAX).min(1u128 << 64));
    }
    if cum != Rational::one() {
        return Err(Error::NumericalFailure(format!(
            "conditionals after {} sum to {cum}",
            label()
        )));
    }
    Ok(Node { conditionals, cuts })
}

/// One exact sample; for many samples reuse a [`ChainSampler`].
pub fn chain_rule_sample(m: &KDetMeasure, s: &mut SamplerState) -> Result<Coloring> {
    ChainSampler::new(m).sample(s)
}

/// A spanning tree oriented toward the root, with edge colors.
#[derive(Clone, Debug, PartialEq)]
pub struct WilsonSample {
    /// Out-edge of each vertex (`None` at the root).
    pub out_edge: Vec<Option<usize>>,
    /// Zero-based color of each vertex's out-edge (`None` at the root).
    pub edge_color: Vec<Option<usize>>,
    /// Colors of the non-root vertices in position order.
    pub coloring: Coloring,
}

/// Wilson's algorithm on a fixed graph with float conductances.
#[derive(Clone, Debug)]
pub struct WilsonSampler {
    root: usize,
    positions: Vec<usize>,
    steps: Vec<Vec<(usize, usize)>>,
    step_dist: Vec<Option<WeightedIndex<f64>>>,
    color_dist: Vec<Option<WeightedIndex<f64>>>,
}

impl WilsonSampler {
    pub fn new(g: &ConductanceGraph) -> Result<Self> {
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let steps: Vec<Vec<(usize, usize)>> = (0..g.vertices()).map(|v| g.incident(v)).collect();
        let weighted = |w: Vec<f64>| WeightedIndex::new(w).map_err(|e| Error::NumericalFailure(e.to_string()));
        let step_dist = steps
            .iter()
            .map(|inc| {
                if inc.is_empty() {
                    Ok(None)
                } else {
                    weighted(
                        inc.iter()
                            .map(|&(e, _)| rational_to_f64(&g.edges()[e].conductance))
                            .collect(),
                    )
                    .map(Some)
                }
            })
            .collect::<Result<_>>()?;
        let color_dist = g
            .edges()
            .iter()
            .map(|e| weighted(e.split.iter().map(rational_to_f64).collect()).map(Some))
            .collect::<Result<_>>()?;
        Ok(WilsonSampler {
            root: g.root(),
            positions: g.positions(),
            steps,
            step_dist,
            color_dist,
        })
    }

    pub fn sample(&self, s: &mut SamplerState) -> WilsonSample {
        let n = self.steps.len();
        let mut in_tree = vec![false; n];
        let mut next: Vec<Option<(usize, usize)>> = vec![None; n];
        in_tree[self.root] = true;
        for start in 0..n {
            let mut u = start;
            while !in_tree[u] {
                let dist = self.step_dist[u].as_ref().expect("connected graph");
                let step = self.steps[u][dist.sample(&mut s.rng)];
                next[u] = Some(step);
                u = step.1;
            }
            u = start;
            while !in_tree[u] {
                in_tree[u] = true;
                u = next[u].expect("walk visited").1;
            }
        }
        let out_edge: Vec<Option<usize>> = next.iter().map(|s| s.map(|(e, _)| e)).collect();
        let mut edge_color = vec![None; n];
        for v in 0..n {
            if let Some(e) = out_edge[v] {
                let dist = self.color_dist[e].as_ref().expect("split weights");
                edge_color[v] = Some(dist.sample(&mut s.rng));
            }
        }
        let coloring = Coloring::from_zero_based(
            self.positions
                .iter()
                .map(|&v| edge_color[v].expect("non-root vertex"))
                .collect(),
        );
        WilsonSample {
            out_edge,
            edge_color,
            coloring,
        }
    }
}

pub fn wilson_sample(g: &ConductanceGraph, s: &mut SamplerState) -> Result<WilsonSample> {
    Ok(WilsonSampler::new(g)?.sample(s))
}
