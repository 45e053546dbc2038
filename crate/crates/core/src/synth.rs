//! Seeded synthetic trajectories with planted dwell episodes.
//!
//! Each user alternates dwell episodes and transition gaps. During a dwell,
//! events arrive as a Poisson process at the planted location; each event is
//! replaced by a uniformly random other location with probability
//! `noise_prob`, and may be repeated `burst_size` times at the same timestamp
//! with probability `burst_prob`. Transition gaps hold a few events at random
//! locations. Users draw from independent ChaCha streams, so generation is
//! deterministic under the seed and independent of how users are scheduled.

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, WeightedIndex};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{LocationSymbol, SymbolicTrajectory, Timestamp, TrajPoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DwellEpisode {
    /// Index into the alphabet.
    pub location: usize,
    pub duration_secs: f64,
    pub rate_per_hour: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EpisodePlan {
    /// Every user follows the same episode list.
    Fixed { episodes: Vec<DwellEpisode> },
    /// Each user gets `places` random locations with geometrically decaying
    /// popularity; consecutive episodes never repeat a place.
    HeavyTail {
        episodes: usize,
        places: usize,
        popularity_ratio: f64,
        min_duration_secs: f64,
        max_duration_secs: f64,
        rate_per_hour: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_users: usize,
    pub alphabet_size: usize,
    pub plan: EpisodePlan,
    pub transition_gap_secs: f64,
    pub transition_events: usize,
    pub noise_prob: f64,
    pub burst_prob: f64,
    pub burst_size: usize,
    pub seed: u64,
    pub start_ts: Timestamp,
}

/// One planted dwell: the span of its emitted events and its location.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedDwell {
    pub start: Timestamp,
    pub end: Timestamp,
    pub location: LocationSymbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserGroundTruth {
    pub user_id: String,
    pub dwells: Vec<PlantedDwell>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthDataset {
    pub trajectories: Vec<SymbolicTrajectory>,
    pub ground_truth: Vec<UserGroundTruth>,
}

/// 2012-04-01T00:00:00Z
const DEFAULT_START: Timestamp = 1_333_238_400;

impl SynthConfig {
    /// Three well-separated dwells per user at locations 0, 1, 2.
    pub fn basic(n_users: usize, seed: u64) -> Self {
        let episode = |location| DwellEpisode {
            location,
            duration_secs: 3.0 * 3600.0,
            rate_per_hour: 12.0,
        };
        Self {
            n_users,
            alphabet_size: 50,
            plan: EpisodePlan::Fixed {
                episodes: vec![episode(0), episode(1), episode(2)],
            },
            transition_gap_secs: 3600.0,
            transition_events: 0,
            noise_prob: 0.0,
            burst_prob: 0.0,
            burst_size: 1,
            seed,
            start_ts: DEFAULT_START,
        }
    }

    /// Geometric place popularity with sparse transition events, giving a
    /// heavy-tailed visitation rank distribution.
    pub fn heavy_tail(n_users: usize, seed: u64) -> Self {
        Self {
            n_users,
            alphabet_size: 300,
            plan: EpisodePlan::HeavyTail {
                episodes: 30,
                places: 12,
                popularity_ratio: 0.3,
                min_duration_secs: 3600.0,
                max_duration_secs: 4.0 * 3600.0,
                rate_per_hour: 6.0,
            },
            transition_gap_secs: 1800.0,
            transition_events: 1,
            noise_prob: 0.03,
            burst_prob: 0.02,
            burst_size: 3,
            seed,
            start_ts: DEFAULT_START,
        }
    }

    /// Users of roughly `points` events each, for throughput measurements.
    pub fn sized(n_users: usize, points: usize, seed: u64) -> Self {
        let episodes = (points / 50).max(1);
        Self {
            n_users,
            alphabet_size: 500,
            plan: EpisodePlan::HeavyTail {
                episodes,
                places: 20,
                popularity_ratio: 0.6,
                min_duration_secs: 2.0 * 3600.0,
                max_duration_secs: 6.0 * 3600.0,
                rate_per_hour: 11.0,
            },
            transition_gap_secs: 1200.0,
            transition_events: 2,
            noise_prob: 0.1,
            burst_prob: 0.02,
            burst_size: 2,
            seed,
            start_ts: DEFAULT_START,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        for (name, p) in [
            ("noise_prob", self.noise_prob),
            ("burst_prob", self.burst_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        if self.alphabet_size < 2 {
            return bad("alphabet_size must be at least 2".into());
        }
        if self.burst_size == 0 {
            return bad("burst_size must be at least 1".into());
        }
        if !(self.transition_gap_secs.is_finite() && self.transition_gap_secs >= 0.0) {
            return bad("transition_gap_secs must be non-negative".into());
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        match &self.plan {
            EpisodePlan::Fixed { episodes } => {
                for e in episodes {
                    if e.location >= self.alphabet_size {
                        return bad(format!("episode location {} outside alphabet", e.location));
                    }
                    if !positive(e.duration_secs) || !positive(e.rate_per_hour) {
                        return bad("episode durations and rates must be positive".into());
                    }
                }
            }
            EpisodePlan::HeavyTail {
                places,
                popularity_ratio,
                min_duration_secs,
                max_duration_secs,
                rate_per_hour,
                ..
            } => {
                if *places == 0 || *places > self.alphabet_size {
                    return bad(format!("places must lie in [1, {}]", self.alphabet_size));
                }
                if !(positive(*popularity_ratio) && *popularity_ratio <= 1.0) {
                    return bad("popularity_ratio must lie in (0, 1]".into());
                }
                if !positive(*min_duration_secs) || max_duration_secs < min_duration_secs {
                    return bad("durations must be positive and ordered".into());
                }
                if !positive(*rate_per_hour) {
                    return bad("rate_per_hour must be positive".into());
                }
            }
        }
        Ok(())
    }
}

pub fn location_label(index: usize) -> String {
    format!("LA{index:04}")
}

/// Generates the dataset and its planted ground truth.
pub fn generate_dataset(config: &SynthConfig) -> Result<SynthDataset> {
    config.validate()?;
    let alphabet: Vec<LocationSymbol> = (0..config.alphabet_size)
        .map(|i| LocationSymbol::new(location_label(i)).expect("non-empty label"))
        .collect();
    let (trajectories, ground_truth) = (0..config.n_users)
        .into_par_iter()
        .map(|u| generate_user(config, &alphabet, u))
        .unzip();
    Ok(SynthDataset {
        trajectories,
        ground_truth,
    })
}

struct Plan {
    location: usize,
    duration_secs: f64,
    rate_per_hour: f64,
}

fn plan_for_user(config: &SynthConfig, rng: &mut ChaCha8Rng) -> Vec<Plan> {
    match &config.plan {
        EpisodePlan::Fixed { episodes } => episodes
            .iter()
            .map(|e| Plan {
                location: e.location,
                duration_secs: e.duration_secs,
                rate_per_hour: e.rate_per_hour,
            })
            .collect(),
        EpisodePlan::HeavyTail {
            episodes,
            places,
            popularity_ratio,
            min_duration_secs,
            max_duration_secs,
            rate_per_hour,
        } => {
            let chosen = sample(rng, config.alphabet_size, *places).into_vec();
            let weights: Vec<f64> = (0..*places)
                .map(|i| popularity_ratio.powi(i as i32))
                .collect();
            let dist = WeightedIndex::new(&weights).expect("positive weights");
            let mut out: Vec<Plan> = Vec::with_capacity(*episodes);
            let mut previous = None;
            for _ in 0..*episodes {
                let mut slot = dist.sample(rng);
                while *places > 1 && Some(slot) == previous {
                    slot = dist.sample(rng);
                }
                previous = Some(slot);
                let duration_secs = if max_duration_secs > min_duration_secs {
                    rng.gen_range(*min_duration_secs..*max_duration_secs)
                } else {
                    *min_duration_secs
                };
                out.push(Plan {
                    location: chosen[slot],
                    duration_secs,
                    rate_per_hour: *rate_per_hour,
                });
            }
            out
        }
    }
}

fn other_location(rng: &mut ChaCha8Rng, alphabet_size: usize, planted: usize) -> usize {
    let i = rng.gen_range(0..alphabet_size - 1);
    if i >= planted {
        i + 1
    } else {
        i
    }
}

fn generate_user(
    config: &SynthConfig,
    alphabet: &[LocationSymbol],
    user: usize,
) -> (SymbolicTrajectory, UserGroundTruth) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(user as u64);
    let plan = plan_for_user(config, &mut rng);

    let user_id = format!("u{user:06}");
    let mut points: Vec<TrajPoint> = Vec::new();
    let mut dwells = Vec::with_capacity(plan.len());
    let mut clock = config.start_ts as f64;

    for episode in &plan {
        let gaps = Exp::new(episode.rate_per_hour / 3600.0).expect("positive rate");
        let end = clock + episode.duration_secs;
        let mut t = clock + gaps.sample(&mut rng);
        let mut span: Option<(Timestamp, Timestamp)> = None;
        while t < end {
            let ts = t.floor() as Timestamp;
            let loc = if rng.gen_bool(config.noise_prob) {
                other_location(&mut rng, config.alphabet_size, episode.location)
            } else {
                episode.location
            };
            let copies = if config.burst_size > 1 && rng.gen_bool(config.burst_prob) {
                config.burst_size
            } else {
                1
            };
            for _ in 0..copies {
                points.push(TrajPoint::new(ts, alphabet[loc].clone()));
            }
            span = Some(span.map_or((ts, ts), |(s, _)| (s, ts)));
            t += gaps.sample(&mut rng);
        }
        if let Some((start, end)) = span {
            dwells.push(PlantedDwell {
                start,
                end,
                location: alphabet[episode.location].clone(),
            });
        }

        clock = end;
        let m = config.transition_events;
        for i in 0..m {
            let ts = clock + config.transition_gap_secs * (i + 1) as f64 / (m + 1) as f64;
            let loc = rng.gen_range(0..config.alphabet_size);
            points.push(TrajPoint::new(
                ts.floor() as Timestamp,
                alphabet[loc].clone(),
            ));
        }
        clock += config.transition_gap_secs;
    }

    let trajectory =
        SymbolicTrajectory::new(user_id.clone(), points).expect("generated in time order");
    (trajectory, UserGroundTruth { user_id, dwells })
}
