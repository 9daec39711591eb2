//! Instance generators: uniform random means for experiments, plus the
//! hard instances used in the lower-bound constructions.
//!
//! Arm 0 is the distinguished arm in those constructions.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::env::{BanditInstance, LocalConfigs, MeanTable};
use crate::error::{Error, Result};
use crate::graph::{neighborhood_partition, InterferenceGraph};
use crate::rng::{stream, Stream};

/// Every `μ_i(code)` drawn independently from `U[0, 1]`, noise sd 1.
pub fn random_instance(g: &InterferenceGraph, k: usize, seed: u64) -> Result<BanditInstance> {
    let configs = LocalConfigs::new(g, k)?;
    let mut rng = stream(seed, Stream::Instance);
    let means = (0..g.n_units())
        .map(|i| {
            (0..configs.table_len(i))
                .map(|_| rng.gen::<f64>())
                .collect()
        })
        .collect();
    BanditInstance::new(g.clone(), k, MeanTable(means))
}

/// Per-unit gaps `Δ_i = scale · sqrt((k-1)^(D_j+1) / (T M m_j))` where `j`
/// is the class of `i`.
pub fn theorem2_gaps(
    g: &InterferenceGraph,
    k: usize,
    horizon: usize,
    epsilon_scale: f64,
) -> Result<Vec<f64>> {
    if k < 2 {
        return Err(Error::InstanceInvalid("need at least two arms".into()));
    }
    if !(epsilon_scale > 0.0 && epsilon_scale <= 1.0) {
        return Err(Error::InstanceInvalid(format!(
            "epsilon scale {epsilon_scale} outside (0, 1]"
        )));
    }
    let partition = neighborhood_partition(g);
    let m = partition.len() as f64;
    let km1 = (k - 1) as f64;
    let required = 4.0 * km1.powi(g.max_degree() as i32 + 1) / m;
    if (horizon as f64) < required {
        return Err(Error::HorizonTooSmall { horizon, required });
    }
    let mut gaps = vec![0.0; g.n_units()];
    for (j, class) in partition.classes().iter().enumerate() {
        let d = partition.common_degree(j) as i32;
        let gap =
            epsilon_scale * (km1.powi(d + 1) / (horizon as f64 * m * class.len() as f64)).sqrt();
        for &i in class {
            gaps[i] = gap;
        }
    }
    Ok(gaps)
}

/// Unit `i` earns `Δ_i` when its whole neighborhood plays arm 0, else 0.
pub fn theorem2_base_instance(
    g: &InterferenceGraph,
    k: usize,
    horizon: usize,
    epsilon_scale: f64,
) -> Result<BanditInstance> {
    let gaps = theorem2_gaps(g, k, horizon, epsilon_scale)?;
    let configs = LocalConfigs::new(g, k)?;
    let means = gaps
        .iter()
        .enumerate()
        .map(|(i, &gap)| {
            let mut table = vec![0.0; configs.table_len(i)];
            table[0] = gap;
            table
        })
        .collect();
    BanditInstance::new(g.clone(), k, MeanTable(means))
}

/// Copy of `base` where each unit additionally earns `2 μ_i(0)` on the
/// local configuration that `a_prime` induces.
pub fn theorem2_confusing_instance(
    base: &BanditInstance,
    a_prime: &[usize],
) -> Result<BanditInstance> {
    let configs = base.configs();
    configs.validate(a_prime)?;
    if let Some(unit) = a_prime.iter().position(|&a| a == 0) {
        return Err(Error::ArmOneUsed(unit));
    }
    let mut means = base.means().clone();
    for (i, table) in means.0.iter_mut().enumerate() {
        table[configs.code(i, a_prime)] = 2.0 * table[0];
    }
    BanditInstance::new(base.graph().clone(), base.k(), means)?.with_noise_sd(base.noise_sd())
}

/// Star with centre 0 and leaves `1..=d`. One centre configuration, chosen
/// by `seed`, has mean `1/2 + gap`; every other mean is `1/2`.
pub fn star_hard_instance(
    center_degree: usize,
    k: usize,
    gap: f64,
    seed: u64,
) -> Result<BanditInstance> {
    if !(gap > 0.0 && gap <= 0.5) {
        return Err(Error::InstanceInvalid(format!(
            "gap {gap} outside (0, 1/2]"
        )));
    }
    let edges: Vec<(usize, usize)> = (1..=center_degree).map(|leaf| (0, leaf)).collect();
    let g = InterferenceGraph::new(center_degree + 1, &edges)?;
    let configs = LocalConfigs::new(&g, k)?;
    let mut means: Vec<Vec<f64>> = (0..g.n_units())
        .map(|i| vec![0.5; configs.table_len(i)])
        .collect();
    let codes: Vec<usize> = (0..configs.table_len(0)).collect();
    let best = *codes
        .choose(&mut stream(seed, Stream::Instance))
        .expect("centre table is nonempty");
    means[0][best] = 0.5 + gap;
    BanditInstance::new(g, k, MeanTable(means))
}
