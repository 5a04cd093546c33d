use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::latent::{update_w_streamed, update_z_streamed};
use super::reshuffle::reshuffle;
use super::sigma::update_sigmas;
use super::urn::urn_pass;
use crate::error::{Error, Result};
use crate::inference::CpoAccumulator;
use crate::model::{state_entry_likelihoods, Axis, Cutoffs, Initialization, LatentState, ModelConfig, OrdinalDataset, Partition};
use crate::scalar::Real;

/// Run length, storage and RNG settings of one chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GibbsControls {
    pub iterations: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
    pub parallel_latent: bool,
    /// Keep the full per-entry likelihood matrix of every stored draw; when
    /// off only the streaming CPO accumulator is kept.
    pub store_likelihoods: bool,
    pub init: Initialization,
}

impl GibbsControls {
    pub fn new(iterations: u64, burn_in: u64, thin: u64, seed: u64) -> Result<Self> {
        let c = Self {
            iterations,
            burn_in,
            thin,
            seed,
            parallel_latent: false,
            store_likelihoods: false,
            init: Initialization::default(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.burn_in >= self.iterations {
            return Err(Error::invalid(format!(
                "burn-in ({}) must be smaller than the number of iterations ({})",
                self.burn_in, self.iterations
            )));
        }
        if self.thin == 0 {
            return Err(Error::invalid("thin must be at least 1"));
        }
        Ok(())
    }

    pub fn stored_draws(&self) -> usize {
        ((self.iterations - self.burn_in) / self.thin) as usize
    }
}

/// One full sweep: row urn, column urn, both reshuffles, `z`, `w`, variances.
pub fn gibbs_sweep<T: Real, R: Rng + ?Sized>(
    state: &mut LatentState<T>,
    data: &OrdinalDataset,
    cutoffs: &Cutoffs<T>,
    config: &ModelConfig<T>,
    rng: &mut R,
) -> Result<()> {
    gibbs_sweep_with(state, data, cutoffs, config, rng, false)
}

pub fn gibbs_sweep_with<T: Real, R: Rng + ?Sized>(
    state: &mut LatentState<T>,
    data: &OrdinalDataset,
    cutoffs: &Cutoffs<T>,
    config: &ModelConfig<T>,
    rng: &mut R,
    parallel_latent: bool,
) -> Result<()> {
    let it = state.iteration() + 1;
    let step = |res: Result<()>| res.map_err(|e| e.at_iteration(it));
    step(urn_pass(Axis::Rows, state, config, rng))?;
    step(urn_pass(Axis::Cols, state, config, rng))?;
    step(reshuffle(Axis::Rows, state, config, rng))?;
    step(reshuffle(Axis::Cols, state, config, rng))?;
    let (zs, ws) = (rng.random(), rng.random());
    step(update_z_streamed(state, data, cutoffs, zs, parallel_latent))?;
    step(update_w_streamed(state, data, ws, parallel_latent))?;
    step(update_sigmas(state, config, rng))?;
    state.bump_iteration();
    Ok(())
}

/// Post-burn-in draws of one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput<T> {
    pub iterations: Vec<u64>,
    pub row_draws: Vec<Partition>,
    pub col_draws: Vec<Partition>,
    pub sigma1_sq: Vec<T>,
    pub sigma2_sq: Vec<T>,
    pub k_n: Vec<usize>,
    pub k_p: Vec<usize>,
    /// `n·p` entry likelihoods per stored draw, row-major; present only when
    /// requested.
    pub likelihoods: Option<Vec<Vec<T>>>,
    pub cpo: CpoAccumulator,
    pub last_state: LatentState<T>,
    /// Set when the chain stopped early; the draws up to that point are kept
    /// but should not be trusted.
    pub failure: Option<Error>,
}

impl<T: Real> ChainOutput<T> {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }

    pub fn len(&self) -> usize {
        self.iterations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterations.is_empty()
    }

    pub fn lpml(&self) -> Result<f64> {
        self.cpo.lpml()
    }
}

pub fn run_chain<T: Real>(
    data: &OrdinalDataset,
    cutoffs: &Cutoffs<T>,
    config: &ModelConfig<T>,
    controls: &GibbsControls,
) -> Result<ChainOutput<T>> {
    controls.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(controls.seed);
    let state = LatentState::initialize_with(data, cutoffs, config, controls.init, &mut rng)?;
    run_chain_from(state, data, cutoffs, config, controls, &mut rng)
}

/// Continues a chain from an arbitrary consistent state.
pub fn run_chain_from<T: Real, R: Rng + ?Sized>(
    mut state: LatentState<T>,
    data: &OrdinalDataset,
    cutoffs: &Cutoffs<T>,
    config: &ModelConfig<T>,
    controls: &GibbsControls,
    rng: &mut R,
) -> Result<ChainOutput<T>> {
    controls.validate()?;
    state.check_consistency(data, cutoffs)?;
    let cap = controls.stored_draws();
    let mut out = ChainOutput {
        iterations: Vec::with_capacity(cap),
        row_draws: Vec::with_capacity(cap),
        col_draws: Vec::with_capacity(cap),
        sigma1_sq: Vec::with_capacity(cap),
        sigma2_sq: Vec::with_capacity(cap),
        k_n: Vec::with_capacity(cap),
        k_p: Vec::with_capacity(cap),
        likelihoods: controls.store_likelihoods.then(|| Vec::with_capacity(cap)),
        cpo: CpoAccumulator::new(data.n() * data.p()),
        last_state: state.clone(),
        failure: None,
    };
    for it in 1..=controls.iterations {
        if let Err(e) = gibbs_sweep_with(&mut state, data, cutoffs, config, rng, controls.parallel_latent) {
            log::warn!("chain stopped: {e}");
            out.failure = Some(e);
            break;
        }
        if it <= controls.burn_in || (it - controls.burn_in) % controls.thin != 0 {
            continue;
        }
        let lik = match state_entry_likelihoods(&state, data, cutoffs) {
            Ok(l) => l,
            Err(e) => {
                out.failure = Some(e.at_iteration(it));
                break;
            }
        };
        out.cpo.push(&lik)?;
        if let Some(store) = out.likelihoods.as_mut() {
            store.push(lik);
        }
        out.iterations.push(it);
        out.row_draws.push(Partition::new(state.row_labels()));
        out.col_draws.push(Partition::new(state.col_labels()));
        out.sigma1_sq.push(state.sigma1_sq());
        out.sigma2_sq.push(state.sigma2_sq());
        out.k_n.push(state.k_n());
        out.k_p.push(state.k_p());
    }
    out.last_state = state;
    Ok(out)
}
