use serde::{Deserialize, Serialize};

use super::dynamics::{bernoulli, cubic_increment, intensity, momentum_update};
use super::normal::normal_cdf;
use super::params::ModelParams;
use super::rng::RngStream;
use crate::error::ModelError;

/// Evolving state at period `t`.
///
/// The log-price is held on its tick lattice: `ticks` counts net up-moves
/// and `log_price == log_p0 + d * ticks` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimState {
    pub t: usize,
    pub ticks: i64,
    pub log_price: f64,
    pub prev_log_price: f64,
    pub momentum: f64,
    pub x: f64,
    pub n_trades: u64,
}

impl SimState {
    /// State at `t = 1`: `log P_0 = log P_1 = log_p0`, `x_1 = x0`,
    /// `M_1 = 0` (empty sum), `N_1 = 0`.
    pub fn initial(params: &ModelParams) -> Self {
        SimState {
            t: 1,
            ticks: 0,
            log_price: params.log_p0,
            prev_log_price: params.log_p0,
            momentum: 0.0,
            x: params.x0,
            n_trades: 0,
        }
    }
}

/// Observables of one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub log_price: f64,
    pub momentum: f64,
    pub lambda: f64,
    pub x: f64,
    pub trade: bool,
    pub direction: bool,
    pub n_trades: u64,
}

impl StepRecord {
    fn initial(params: &ModelParams, state: &SimState) -> Self {
        StepRecord {
            t: state.t,
            log_price: state.log_price,
            momentum: state.momentum,
            lambda: intensity(params, state.momentum),
            x: state.x,
            trade: false,
            direction: false,
            n_trades: state.n_trades,
        }
    }
}

/// A full run: one record per period `t = 1..=T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: ModelParams,
    pub seed: u64,
    pub records: Vec<StepRecord>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn log_prices(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.log_price)
    }

    pub fn momenta(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.momentum)
    }

    /// Log-returns `log P_s - log P_{s-1}` for `s = 1..=T`; the first is
    /// zero because `log P_0 = log P_1`.
    pub fn returns(&self) -> Vec<f64> {
        let mut prev = self.params.log_p0;
        self.records
            .iter()
            .map(|r| {
                let ret = r.log_price - prev;
                prev = r.log_price;
                ret
            })
            .collect()
    }
}

/// Advances `state` from `t - 1` to `t`.
///
/// Order within the step: momentum, intensity, trade draw, direction state,
/// direction draw, price. The direction draw happens even without a trade so
/// every step consumes exactly two uniforms.
pub fn step(
    params: &ModelParams,
    state: &SimState,
    rng: &mut RngStream,
) -> Result<(SimState, StepRecord), ModelError> {
    if state.t < 1 {
        return Err(ModelError::domain(
            "step",
            "state must be at t >= 1 (t = 0 and 1 are initial conditions)",
        ));
    }
    let t = state.t + 1;

    let momentum = momentum_update(
        state.momentum,
        state.log_price - state.prev_log_price,
        params.decay_rate,
    );
    let lambda = intensity(params, momentum);
    let trade = bernoulli(normal_cdf(lambda)?, rng)?;
    let x = state.x + cubic_increment(params, momentum);
    let direction = bernoulli(normal_cdf(x)?, rng)?;

    let ticks = match (trade, direction) {
        (false, _) => state.ticks,
        (true, true) => state.ticks + 1,
        (true, false) => state.ticks - 1,
    };
    let log_price = if trade {
        params.log_p0 + params.tick_size * ticks as f64
    } else {
        state.log_price
    };
    let n_trades = state.n_trades + u64::from(trade);

    let next = SimState {
        t,
        ticks,
        log_price,
        prev_log_price: state.log_price,
        momentum,
        x,
        n_trades,
    };
    let record = StepRecord {
        t,
        log_price,
        momentum,
        lambda,
        x,
        trade,
        direction,
        n_trades,
    };
    Ok((next, record))
}

/// Runs the model for `T` periods from a fresh stream seeded with `seed`.
pub fn simulate(params: &ModelParams, seed: u64) -> Result<Trajectory, ModelError> {
    let mut rng = RngStream::new(seed);
    simulate_with_rng(params, &mut rng)
}

/// Runs the model on a caller-supplied stream. Consumes `2 (T - 1)` draws.
pub fn simulate_with_rng(
    params: &ModelParams,
    rng: &mut RngStream,
) -> Result<Trajectory, ModelError> {
    params.validate()?;
    let mut state = SimState::initial(params);
    let mut records = Vec::with_capacity(params.periods);
    records.push(StepRecord::initial(params, &state));
    for _ in 2..=params.periods {
        let (next, record) = step(params, &state, rng)?;
        records.push(record);
        state = next;
    }
    Ok(Trajectory {
        params: *params,
        seed: rng.seed(),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at_rest() -> SimState {
        SimState::initial(&ModelParams::default())
    }

    #[test]
    fn step_rejects_t_zero() {
        let mut rng = RngStream::new(0);
        let state = SimState { t: 0, ..at_rest() };
        assert!(step(&ModelParams::default(), &state, &mut rng).is_err());
    }

    #[test]
    fn step_consumes_two_draws() {
        let mut rng = RngStream::new(9);
        let p = ModelParams::default();
        let (s, _) = step(&p, &at_rest(), &mut rng).unwrap();
        assert_eq!(rng.draws(), 2);
        step(&p, &s, &mut rng).unwrap();
        assert_eq!(rng.draws(), 4);
    }

    #[test]
    fn no_trade_leaves_price_unchanged() {
        let p = ModelParams {
            base_intensity: -50.0,
            ..Default::default()
        };
        let mut rng = RngStream::new(1);
        let mut s = at_rest();
        for _ in 0..100 {
            let (next, rec) = step(&p, &s, &mut rng).unwrap();
            assert!(!rec.trade);
            assert_eq!(next.log_price, s.log_price);
            s = next;
        }
    }

    #[test]
    fn certain_up_trade_moves_one_tick() {
        // Λ huge → Φ(λ) = 1; x0 huge → Φ(x) = 1.
        let p = ModelParams {
            base_intensity: 50.0,
            x0: 50.0,
            ..Default::default()
        };
        let mut rng = RngStream::new(5);
        let (s, rec) = step(&p, &SimState::initial(&p), &mut rng).unwrap();
        assert!(rec.trade && rec.direction);
        assert_eq!(s.log_price - p.log_p0, 0.01);
        assert_eq!(s.n_trades, 1);
        assert_eq!(s.t, 2);
    }

    #[test]
    fn at_rest_probabilities() {
        let p = ModelParams::default();
        let s = at_rest();
        let m = momentum_update(s.momentum, 0.0, p.decay_rate);
        let p_trade = normal_cdf(intensity(&p, m)).unwrap();
        let p_up = normal_cdf(s.x + cubic_increment(&p, m)).unwrap();
        assert!((p_trade - 0.022_750_131_948_179_2).abs() < 1e-12);
        assert!((p_up - 0.501_595_764_866_231_6).abs() < 1e-12, "{p_up}");
    }

    #[test]
    fn simulate_shape_and_initial_conditions() {
        let p = ModelParams {
            periods: 50,
            log_p0: 1.5,
            x0: 0.25,
            ..Default::default()
        };
        let traj = simulate(&p, 11).unwrap();
        assert_eq!(traj.len(), 50);
        let first = traj.records[0];
        assert_eq!(first.t, 1);
        assert_eq!(first.log_price, 1.5);
        assert_eq!(first.x, 0.25);
        assert_eq!(first.momentum, 0.0);
        assert_eq!(first.n_trades, 0);
        assert_eq!(traj.records[1].momentum, 0.0);
        assert!(traj.records.windows(2).all(|w| w[1].t == w[0].t + 1));
    }

    #[test]
    fn simulate_rejects_invalid_params() {
        let p = ModelParams {
            tick_size: 0.0,
            ..Default::default()
        };
        assert!(matches!(simulate(&p, 0), Err(ModelError::InvalidParams(_))));
    }

    #[test]
    fn flat_when_trades_never_fire() {
        let p = ModelParams {
            base_intensity: -50.0,
            ..Default::default()
        };
        let traj = simulate(&p, 99).unwrap();
        assert!(traj.log_prices().all(|lp| lp == 0.0));
        assert_eq!(traj.records.last().unwrap().n_trades, 0);
    }

    #[test]
    fn rng_alignment_is_path_independent() {
        for (lambda, seed) in [(-50.0, 1), (-2.0, 2), (3.0, 3)] {
            let p = ModelParams {
                periods: 300,
                base_intensity: lambda,
                ..Default::default()
            };
            let mut rng = RngStream::new(seed);
            simulate_with_rng(&p, &mut rng).unwrap();
            assert_eq!(rng.draws(), 2 * 299);
        }
    }
}
