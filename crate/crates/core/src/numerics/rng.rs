//! Seeded, splittable random number generation.
//!
//! PCG XSL-RR 128/64 with the stream id selecting the increment. Identical
//! `(seed, stream_id)` pairs give identical sample sequences on every run
//! and platform; sub-streams derived from distinct ids are distinct
//! sequences, so per-model work can run concurrently and still match a
//! serial run exactly.

const PCG_MULTIPLIER: u128 = 0x2360_ed05_1fc6_5da4_4385_df64_9fcc_f645;
const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer; a bijection on `u64`.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic generator with derivable sub-streams.
#[derive(Debug, Clone)]
pub struct SeededRng {
    state: u128,
    inc: u128,
    seed: u64,
    stream_id: u64,
    spare_normal: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        // The low 64 bits of the (pre-shift) increment carry the stream id
        // verbatim, so distinct stream ids give distinct odd increments.
        let inc_raw = ((mix64(stream_id) as u128) << 64) | stream_id as u128;
        let inc = (inc_raw << 1) | 1;
        let state_seed = ((mix64(seed) as u128) << 64) | mix64(seed ^ GOLDEN) as u128;
        let mut rng = Self {
            state: 0,
            inc,
            seed,
            stream_id,
            spare_normal: None,
        };
        rng.step();
        rng.state = rng.state.wrapping_add(state_seed);
        rng.step();
        rng
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Derive an independent sub-stream. Injective in `id` for a fixed
    /// parent stream.
    pub fn substream(&self, id: u64) -> SeededRng {
        SeededRng::new(
            self.seed,
            self.stream_id ^ mix64(id ^ 0x5851_f42d_4c95_7f2d),
        )
    }

    fn step(&mut self) {
        self.state = self
            .state
            .wrapping_mul(PCG_MULTIPLIER)
            .wrapping_add(self.inc);
    }

    pub fn next_u64(&mut self) -> u64 {
        self.step();
        let rot = (self.state >> 122) as u32;
        let xored = ((self.state >> 64) as u64) ^ (self.state as u64);
        xored.rotate_right(rot)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        assert!(lo > 0.0 && hi >= lo);
        (self.uniform(lo.ln(), hi.ln())).exp()
    }

    /// Standard normal via Box-Muller; the paired draw is cached.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // u1 in (0, 1] keeps the log finite.
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn rademacher(&mut self) -> f64 {
        if self.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn sign(&mut self) -> f64 {
        self.rademacher()
    }

    pub fn normal_vec(&mut self, dim: usize) -> Vec<f64> {
        (0..dim).map(|_| self.normal()).collect()
    }

    /// Uniform integer in `[0, n)`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_f64() * n as f64) as usize % n
    }
}
