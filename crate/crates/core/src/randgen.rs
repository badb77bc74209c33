//! Deterministic, seeded generation of test matrices.
//!
//! The generator is a counter-based splitmix-style stream over 64-bit
//! integers: every draw is a pure function of `(masterSeed, trialIndex,
//! drawCounter)`, so trials are independently derivable (embarrassingly
//! parallel) and witnesses replay bit-identically on every platform.
//! No platform RNG is involved anywhere.

use crate::matcore::SymMatrix;

/// Golden-ratio increment used by the splitmix64 stream.
const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
/// First splitmix64 finalizer multiplier.
const MIX_A: u64 = 0xBF58_476D_1CE4_E5B9;
/// Second splitmix64 finalizer multiplier.
const MIX_B: u64 = 0x94D0_49BB_1331_11EB;

/// The splitmix64 finalizer: a bijective avalanche mix of one word.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_A);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_B);
    z ^ (z >> 31)
}

/// Counter-based random stream: draw `k` of trial `(seed, index)` is
/// `mix(key + (k+1)·GOLDEN)` with `key = mix(seed ⊕ mix(index ⊕ GOLDEN))`.
#[derive(Debug, Clone)]
pub struct Stream {
    key: u64,
    counter: u64,
    spare_gaussian: Option<f64>,
}

impl Stream {
    /// Stream for one trial of one master seed.
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        Stream {
            key: mix(master_seed ^ mix(trial_index ^ GOLDEN)),
            counter: 0,
            spare_gaussian: None,
        }
    }

    /// Next raw 64-bit word.
    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform draw in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Log-uniform draw in `[lo, hi)`, both positive.
    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (self.uniform_in(lo.ln(), hi.ln())).exp()
    }

    /// Standard Gaussian draw via Box–Muller (pairs cached).
    pub fn gaussian(&mut self) -> f64 {
        if let Some(g) = self.spare_gaussian.take() {
            return g;
        }
        // 1 - uniform() lies in (0, 1], keeping the log finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_gaussian = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Structural family of a generated trial matrix or pair.
#[derive(Debug, Clone, PartialEq)]
pub enum TrialStructure {
    /// Generic positive definite matrix with the requested condition.
    GenericPd,
    /// Positive semidefinite with exact rank.
    PsdWithRank(usize),
    /// Pair `(A, B)` with `A ≤ c·B` by construction.
    OrderedPair,
    /// Pair sharing one eigenbasis.
    CommutingPair,
    /// Small symmetric perturbation of the identity.
    NearIdentity,
}

/// Full description of one deterministic trial draw.
#[derive(Debug, Clone)]
pub struct TrialSpec {
    pub master_seed: u64,
    pub trial_index: u64,
    pub dim: usize,
    /// Target condition number (exact for `rand_spd`).
    pub cond_target: f64,
    pub structure: TrialStructure,
}

impl TrialSpec {
    /// The raw stream for this trial.
    pub fn stream(&self) -> Stream {
        Stream::new(self.master_seed, self.trial_index)
    }
}

/// Random orthogonal matrix (row-major) from modified Gram–Schmidt on a
/// Gaussian draw, with a deterministic sign convention.
pub fn rand_orthogonal(stream: &mut Stream, n: usize) -> Vec<f64> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for _ in 0..n {
        loop {
            let mut v: Vec<f64> = (0..n).map(|_| stream.gaussian()).collect();
            for c in &cols {
                let dot: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= dot * ci;
                }
            }
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-8 {
                for vi in &mut v {
                    *vi /= norm;
                }
                // Sign convention: largest-magnitude component positive.
                let lead = v
                    .iter()
                    .cloned()
                    .fold(0.0_f64, |m, x| if x.abs() > m.abs() { x } else { m });
                if lead < 0.0 {
                    for vi in &mut v {
                        *vi = -*vi;
                    }
                }
                cols.push(v);
                break;
            }
        }
    }
    let mut q = vec![0.0; n * n];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            q[i * n + j] = col[i];
        }
    }
    q
}

fn assemble(n: usize, q: &[f64], eigs: &[f64]) -> SymMatrix {
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += q[i * n + k] * eigs[k] * q[j * n + k];
            }
            data[i * n + j] = acc;
            data[j * n + i] = acc;
        }
    }
    SymMatrix::symmetrized(n, data)
}

/// Eigenvalue profile spanning the requested condition number exactly:
/// the extreme eigenvalues are pinned to `s` and `s/cond` (with a
/// log-uniform overall scale `s ∈ [1/2, 2]`) and interior eigenvalues
/// are log-uniform in between.
fn spd_profile(stream: &mut Stream, n: usize, cond: f64) -> Vec<f64> {
    let s = stream.log_uniform(0.5, 2.0);
    let cond = cond.max(1.0);
    (0..n)
        .map(|i| {
            if i == 0 || cond == 1.0 {
                s
            } else if i == n - 1 {
                s / cond
            } else {
                s * cond.powf(-stream.uniform())
            }
        })
        .collect()
}

/// Positive definite matrix with `cond(result)` equal to the target
/// (within round-off), as `QΛQᵀ` with a seeded orthogonal `Q`.
pub fn rand_spd(spec: &TrialSpec) -> SymMatrix {
    let mut stream = spec.stream();
    let n = spec.dim;
    let eigs = spd_profile(&mut stream, n, spec.cond_target);
    let q = rand_orthogonal(&mut stream, n);
    assemble(n, &q, &eigs)
}

/// Positive semidefinite matrix of exact rank `r`: `r` positive
/// eigenvalues spanning the requested condition number (as in
/// [`rand_spd`]) completed by zeros, in a seeded orthogonal basis.
/// Pinning the positive part keeps the conditioning of singular draws
/// under the caller's control, which Gaussian outer products would not.
pub fn rand_psd_rank(spec: &TrialSpec, r: usize) -> SymMatrix {
    let mut stream = spec.stream();
    let n = spec.dim;
    assert!(r >= 1 && r <= n, "rank {r} outside 1..={n}");
    let mut eigs = spd_profile(&mut stream, r, spec.cond_target);
    eigs.resize(n, 0.0);
    let q = rand_orthogonal(&mut stream, n);
    assemble(n, &q, &eigs)
}

/// Ordered pair `(A, B, c)` with `A = B^{1/2} W B^{1/2} ≤ c·B`,
/// `c = ‖W‖`, both positive definite.
pub fn rand_ordered_pair(spec: &TrialSpec) -> (SymMatrix, SymMatrix, f64) {
    let b = rand_spd(spec);
    let w_spec = TrialSpec {
        trial_index: spec.trial_index ^ 0x5EED_0000_0000_0001,
        ..spec.clone()
    };
    let w = rand_spd(&w_spec);
    let c = w.op_norm().expect("pd norm");
    let root = b.mat_pow(0.5).expect("pd root");
    let a = root.sandwich(&w).expect("same dim");
    (a, b, c)
}

/// Pair of positive definite matrices sharing one eigenbasis.
pub fn rand_commuting_pair(spec: &TrialSpec) -> (SymMatrix, SymMatrix) {
    let mut stream = spec.stream();
    let n = spec.dim;
    let ea = spd_profile(&mut stream, n, spec.cond_target);
    let eb = spd_profile(&mut stream, n, spec.cond_target);
    let q = rand_orthogonal(&mut stream, n);
    (assemble(n, &q, &ea), assemble(n, &q, &eb))
}

/// Identity plus a small symmetric Gaussian perturbation (spectrum in
/// roughly `[1−δ, 1+δ]` with `δ = 0.05`).
pub fn rand_near_identity(spec: &TrialSpec) -> SymMatrix {
    let mut stream = spec.stream();
    let n = spec.dim;
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let g = 0.05 * stream.gaussian() / (n as f64).sqrt();
            data[i * n + j] = g;
            data[j * n + i] = g;
        }
    }
    for i in 0..n {
        data[i * n + i] += 1.0;
    }
    SymMatrix::symmetrized(n, data)
}

/// Dispatches on the structure tag; pair structures return their first
/// element (use the dedicated functions for the full pair).
pub fn rand_matrix(spec: &TrialSpec) -> SymMatrix {
    match &spec.structure {
        TrialStructure::GenericPd => rand_spd(spec),
        TrialStructure::PsdWithRank(r) => rand_psd_rank(spec, *r),
        TrialStructure::OrderedPair => rand_ordered_pair(spec).0,
        TrialStructure::CommutingPair => rand_commuting_pair(spec).0,
        TrialStructure::NearIdentity => rand_near_identity(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(seed: u64, idx: u64, dim: usize, cond: f64) -> TrialSpec {
        TrialSpec {
            master_seed: seed,
            trial_index: idx,
            dim,
            cond_target: cond,
            structure: TrialStructure::GenericPd,
        }
    }

    #[test]
    fn determinism() {
        let s = spec(1, 7, 5, 100.0);
        let a = rand_spd(&s);
        let b = rand_spd(&s);
        assert_eq!(a.entries(), b.entries());
        let c = rand_spd(&spec(1, 8, 5, 100.0));
        assert_ne!(a.entries(), c.entries());
    }

    #[test]
    fn condition_number_control() {
        let m = rand_spd(&spec(1, 0, 6, 1e3));
        let eigs = m.eigh().unwrap().eigenvalues;
        let cond = eigs[0] / eigs[5];
        assert!((500.0..2000.0).contains(&cond), "cond {cond}");
        assert!(eigs[5] > 0.0);

        // condTarget = 1: scalar multiple of the identity conjugated.
        let id_like = rand_spd(&spec(3, 2, 4, 1.0));
        let e = id_like.eigh().unwrap().eigenvalues;
        assert!((e[0] / e[3] - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn rank_control() {
        let s = TrialSpec {
            structure: TrialStructure::PsdWithRank(2),
            ..spec(9, 4, 5, 10.0)
        };
        let m = rand_psd_rank(&s, 2);
        let p = m.support_projection().unwrap();
        assert!((p.trace() - 2.0).abs() <= 1e-9, "trace {}", p.trace());
        assert!(m.lambda_min().unwrap() >= -1e-10);
    }

    #[test]
    fn ordered_pair_dominated() {
        let (a, b, c) = rand_ordered_pair(&spec(5, 11, 4, 50.0));
        let slack = b.scale(c).sub(&a).unwrap().lambda_min().unwrap();
        assert!(slack >= -1e-9 * c * b.op_norm().unwrap(), "slack {slack}");
    }

    #[test]
    fn commuting_pair_commutes() {
        let (a, b) = rand_commuting_pair(&spec(2, 3, 4, 20.0));
        let ab = crate::matcore::mat_mul(4, a.entries(), b.entries());
        let ba = crate::matcore::mat_mul(4, b.entries(), a.entries());
        let diff = ab
            .iter()
            .zip(&ba)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0_f64, f64::max);
        assert!(diff <= 1e-10 * a.max_abs() * b.max_abs());
    }

    #[test]
    fn orthogonal_is_orthogonal() {
        let mut stream = Stream::new(4, 2);
        let q = rand_orthogonal(&mut stream, 6);
        let qt = crate::matcore::transpose(6, &q);
        let qtq = crate::matcore::mat_mul(6, &qt, &q);
        for i in 0..6 {
            for j in 0..6 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((qtq[i * 6 + j] - expect).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn near_identity_spectrum() {
        let s = TrialSpec {
            structure: TrialStructure::NearIdentity,
            ..spec(8, 1, 6, 1.0)
        };
        let m = rand_near_identity(&s);
        let e = m.eigh().unwrap().eigenvalues;
        assert!(e.iter().all(|&l| (l - 1.0).abs() < 0.5));
    }
}
