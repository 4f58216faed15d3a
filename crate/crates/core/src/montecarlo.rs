//! Analog Monte Carlo random walk from an isotropic point source.
//!
//! Each path starts at the origin in a uniformly random direction, flies an
//! exponential distance (mean one free path), and at each collision either
//! scatters by the phase function or is absorbed with probability `1 − ϖ`.
//! Density in radial shells is scored with a track-length estimator and,
//! independently, with a collision estimator. The source emits `2π` in
//! total, matching `u = ∫∫ G dφ dφ₀`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polynomials::Medium;
use crate::quadrature::gauss_legendre_on;

/// Paths per parallel work unit. Fixed so the reduction order, and hence
/// every bit of the result, does not depend on the thread count.
const CHUNK: u64 = 4096;

/// How absorption is applied at a collision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capture {
    /// The path survives with probability `ϖ`.
    Analog,
    /// The weight is multiplied by `ϖ`; Russian roulette below the cutoff.
    Implicit,
}

/// Monte Carlo run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub medium: Medium,
    pub n_paths: u64,
    pub rng_seed: u64,
    pub shell_edges: Vec<f64>,
    /// Roulette threshold, used only with [`Capture::Implicit`].
    pub weight_cutoff: f64,
    /// Collisions after which a path is dropped.
    pub max_scatter_order: u32,
    pub capture: Capture,
}

impl McConfig {
    /// Analog run with default cutoffs.
    pub fn new(medium: Medium, n_paths: u64, rng_seed: u64, shell_edges: Vec<f64>) -> Result<Self> {
        let c = Self {
            medium,
            n_paths,
            rng_seed,
            shell_edges,
            weight_cutoff: 1e-4,
            max_scatter_order: 100_000,
            capture: Capture::Analog,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::Config("n_paths must be at least 1".into()));
        }
        if self.shell_edges.len() < 2 {
            return Err(Error::Config("need at least two shell edges".into()));
        }
        if self.shell_edges[0] < 0.0 || self.shell_edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config(
                "shell edges must be nonnegative and strictly increasing".into(),
            ));
        }
        if !(self.weight_cutoff > 0.0 && self.weight_cutoff < 1.0) {
            return Err(Error::Config("weight_cutoff must lie in (0, 1)".into()));
        }
        Ok(())
    }

    /// Shells `[c − w, c + w]` around each center; overlapping shells are
    /// rejected.
    pub fn shells_around(centers: &[f64], half_width: f64) -> Result<Vec<f64>> {
        let mut edges = Vec::with_capacity(2 * centers.len());
        for &c in centers {
            edges.push(c - half_width);
            edges.push(c + half_width);
        }
        if edges[0] < 0.0 || edges.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Config("shells overlap or reach below r = 0".into()));
        }
        edges.dedup();
        Ok(edges)
    }

    fn shell_count(&self) -> usize {
        self.shell_edges.len() - 1
    }
}

/// Per-shell results of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub shell_centers: Vec<f64>,
    /// Track-length estimate of the density.
    pub u: Vec<f64>,
    pub sigma: Vec<f64>,
    /// Collision estimate of the density.
    pub u_collision: Vec<f64>,
    pub sigma_collision: Vec<f64>,
    /// Paths that scored in at least one shell.
    pub n_effective: u64,
    pub n_paths: u64,
}

impl McEstimate {
    /// Shells where the two estimators differ by more than `k` combined sigmas.
    pub fn estimator_disagreements(&self, k: f64) -> Vec<usize> {
        (0..self.u.len())
            .filter(|&i| {
                let s = self.sigma[i].hypot(self.sigma_collision[i]);
                (self.u[i] - self.u_collision[i]).abs() > k * s
            })
            .collect()
    }
}

/// Scattering angle relative to the incoming direction, drawn from the
/// medium's phase function. Isotropic media draw uniformly; otherwise the
/// cosine series is sampled by rejection under its absolute-sum bound.
pub fn sample_scatter_angle<R: Rng + ?Sized>(medium: &Medium, rng: &mut R) -> Result<f64> {
    if medium.order() == 0 {
        return Ok(rng.gen::<f64>() * TAU - PI);
    }
    let bound = medium.phase_density_bound();
    loop {
        let theta = rng.gen::<f64>() * TAU - PI;
        let p = medium.phase_density(theta);
        if p < 0.0 {
            return Err(Error::InvalidMedium(format!(
                "phase density {p:e} < 0 at angle {theta}"
            )));
        }
        if rng.gen::<f64>() * bound < p {
            return Ok(theta);
        }
    }
}

/// Angle from the untruncated Henyey–Greenstein density
/// `(1/2π)(1 − g²)/(1 + g² − 2g cos θ)` (a wrapped Cauchy law), by
/// inversion.
pub fn sample_hg_untruncated<R: Rng + ?Sized>(g: f64, rng: &mut R) -> f64 {
    let t = (PI * (rng.gen::<f64>() - 0.5)).tan();
    2.0 * ((1.0 - g) / (1.0 + g) * t).atan()
}

struct Tally {
    track: Vec<f64>,
    track_sq: Vec<f64>,
    coll: Vec<f64>,
    coll_sq: Vec<f64>,
    effective: u64,
}

impl Tally {
    fn new(n: usize) -> Self {
        Self {
            track: vec![0.0; n],
            track_sq: vec![0.0; n],
            coll: vec![0.0; n],
            coll_sq: vec![0.0; n],
            effective: 0,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for i in 0..self.track.len() {
            self.track[i] += other.track[i];
            self.track_sq[i] += other.track_sq[i];
            self.coll[i] += other.coll[i];
            self.coll_sq[i] += other.coll_sq[i];
        }
        self.effective += other.effective;
        self
    }
}

// Length of the segment p + t·d, t ∈ [0, s], inside the disk of radius r.
fn chord_in_disk(p: [f64; 2], d: [f64; 2], s: f64, r: f64) -> f64 {
    let b = p[0] * d[0] + p[1] * d[1];
    let c = p[0] * p[0] + p[1] * p[1] - r * r;
    let disc = b * b - c;
    if disc <= 0.0 {
        return 0.0;
    }
    let h = disc.sqrt();
    let (t0, t1) = (-b - h, -b + h);
    (t1.min(s) - t0.max(0.0)).max(0.0)
}

fn shell_of(edges: &[f64], r: f64) -> Option<usize> {
    if r < edges[0] || r >= edges[edges.len() - 1] {
        return None;
    }
    Some(edges.partition_point(|&e| e <= r) - 1)
}

fn run_path(config: &McConfig, index: u64, tally: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    rng.set_stream(index);
    let edges = &config.shell_edges;
    let n = config.shell_count();
    let rmax = edges[n];
    let w_albedo = config.medium.albedo();
    let (mut track, mut coll) = (vec![0.0; n], vec![0.0; n]);
    let mut pos = [0.0f64; 2];
    let mut angle = rng.gen::<f64>() * TAU;
    let mut weight = 1.0;
    let mut scored = false;
    for _ in 0..=config.max_scatter_order {
        let d = [angle.cos(), angle.sin()];
        let s: f64 = rng.sample(Exp1);
        let r0 = pos[0].hypot(pos[1]);
        // A segment can touch the shells only if it starts within s of rmax.
        if r0 - s < rmax {
            let mut inside_prev = chord_in_disk(pos, d, s, edges[0]);
            for i in 0..n {
                let inside = chord_in_disk(pos, d, s, edges[i + 1]);
                let l = inside - inside_prev;
                if l > 0.0 {
                    track[i] += weight * l;
                    scored = true;
                }
                inside_prev = inside;
            }
        }
        pos = [pos[0] + s * d[0], pos[1] + s * d[1]];
        if let Some(i) = shell_of(edges, pos[0].hypot(pos[1])) {
            coll[i] += weight;
            scored = true;
        }
        match config.capture {
            Capture::Analog => {
                if rng.gen::<f64>() >= w_albedo {
                    break;
                }
            }
            Capture::Implicit => {
                weight *= w_albedo;
                if weight < config.weight_cutoff {
                    if rng.gen::<f64>() < 0.5 {
                        break;
                    }
                    weight *= 2.0;
                }
            }
        }
        angle += sample_scatter_angle(&config.medium, &mut rng)?;
    }
    for i in 0..n {
        tally.track[i] += track[i];
        tally.track_sq[i] += track[i] * track[i];
        tally.coll[i] += coll[i];
        tally.coll_sq[i] += coll[i] * coll[i];
    }
    tally.effective += u64::from(scored);
    Ok(())
}

fn run_chunk(config: &McConfig, chunk: u64) -> Result<Tally> {
    let mut tally = Tally::new(config.shell_count());
    let lo = chunk * CHUNK;
    let hi = (lo + CHUNK).min(config.n_paths);
    for index in lo..hi {
        run_path(config, index, &mut tally)?;
    }
    Ok(tally)
}

/// Runs the walk and returns shell densities with standard errors.
///
/// Path `i` draws from its own ChaCha8 stream `(seed, i)`; chunk tallies
/// are merged in chunk order, so results are bit-identical for any thread
/// count.
pub fn run_density(config: &McConfig) -> Result<McEstimate> {
    config.validate()?;
    let chunks = config.n_paths.div_ceil(CHUNK);
    let parts: Vec<Tally> = (0..chunks)
        .into_par_iter()
        .map(|c| run_chunk(config, c))
        .collect::<Result<_>>()?;
    let n = config.shell_count();
    let total = parts.into_iter().fold(Tally::new(n), Tally::merge);
    let np = config.n_paths as f64;
    let edges = &config.shell_edges;
    let mut est = McEstimate {
        shell_centers: edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect(),
        u: Vec::with_capacity(n),
        sigma: Vec::with_capacity(n),
        u_collision: Vec::with_capacity(n),
        sigma_collision: Vec::with_capacity(n),
        n_effective: total.effective,
        n_paths: config.n_paths,
    };
    let stats = |sum: f64, sq: f64, scale: f64| {
        let mean = sum / np;
        let var = if np > 1.0 {
            ((sq / np - mean * mean) * np / (np - 1.0)).max(0.0)
        } else {
            0.0
        };
        (mean * scale, (var / np).sqrt() * scale)
    };
    for i in 0..n {
        let area = PI * (edges[i + 1].powi(2) - edges[i].powi(2));
        let scale = TAU / area;
        let (u, s) = stats(total.track[i], total.track_sq[i], scale);
        let (uc, sc) = stats(total.coll[i], total.coll_sq[i], scale);
        est.u.push(u);
        est.sigma.push(s);
        est.u_collision.push(uc);
        est.sigma_collision.push(sc);
    }
    Ok(est)
}

/// Area average `∫ u(r) 2πr dr / π(r₂² − r₁²)` of a radial density over
/// the shell `[r₁, r₂]`, by 24-point Gauss–Legendre.
pub fn shell_average(u: impl Fn(f64) -> Result<f64>, r1: f64, r2: f64) -> Result<f64> {
    let (nodes, weights) = gauss_legendre_on(24, r1, r2);
    let mut s = 0.0;
    for (r, w) in nodes.iter().zip(&weights) {
        s += w * u(*r)? * r;
    }
    Ok(2.0 * s / (r2 * r2 - r1 * r1))
}

/// Analytic uncollided density `e^{−r}/r` averaged over a shell.
pub fn uncollided_shell_average(r1: f64, r2: f64) -> f64 {
    2.0 * ((-r1).exp() - (-r2).exp()) / (r2 * r2 - r1 * r1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chord_lengths() {
        // Segment along x from the origin, length 3, through disks.
        assert!((chord_in_disk([0.0, 0.0], [1.0, 0.0], 3.0, 2.0) - 2.0).abs() < 1e-15);
        assert_eq!(chord_in_disk([0.0, 0.0], [1.0, 0.0], 3.0, 5.0), 3.0);
        // Miss.
        assert_eq!(chord_in_disk([0.0, 2.0], [1.0, 0.0], 3.0, 1.0), 0.0);
        // Crossing a unit disk along y = 0.5 from x = −2.
        let l = chord_in_disk([-2.0, 0.5], [1.0, 0.0], 4.0, 1.0);
        assert!((l - 2.0 * 0.75f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn shell_lookup() {
        let e = [0.5, 1.0, 2.0];
        assert_eq!(shell_of(&e, 0.4), None);
        assert_eq!(shell_of(&e, 0.5), Some(0));
        assert_eq!(shell_of(&e, 1.5), Some(1));
        assert_eq!(shell_of(&e, 2.0), None);
    }

    #[test]
    fn config_validation() {
        let m = Medium::isotropic(0.5).unwrap();
        assert!(McConfig::new(m.clone(), 0, 1, vec![0.0, 1.0]).is_err());
        assert!(McConfig::new(m.clone(), 10, 1, vec![1.0, 1.0]).is_err());
        assert!(McConfig::new(m.clone(), 10, 1, vec![1.0]).is_err());
        assert!(McConfig::new(m, 10, 1, vec![0.0, 1.0]).is_ok());
        let e = McConfig::shells_around(&[0.75, 1.5, 3.0], 0.05).unwrap();
        assert_eq!(e.len(), 6);
        assert!(McConfig::shells_around(&[0.1, 0.15], 0.05).is_err());
    }

    #[test]
    fn uncollided_average_limit() {
        let (r1, r2) = (1.0 - 1e-4, 1.0 + 1e-4);
        assert!((uncollided_shell_average(r1, r2) - (-1.0f64).exp()).abs() < 1e-8);
        let a = shell_average(|r| Ok((-r).exp() / r), 0.7, 0.8).unwrap();
        assert!((a - uncollided_shell_average(0.7, 0.8)).abs() < 1e-14);
    }
}
