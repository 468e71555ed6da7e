//! Keyed counter-based random streams.
//!
//! Every random draw in the simulator comes from a stream addressed by
//! `(seed, frame_id, beam_index, stage)`. Streams are generated with
//! Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3",
//! SC'11): the 64-bit seed is the Philox key and the remaining address fields
//! plus a block counter form the 128-bit counter:
//!
//! ```text
//! key     = [seed & 0xffff_ffff, seed >> 32]
//! counter = [block, beam_index, frame_id & 0xffff_ffff,
//!            ((frame_id >> 32) & 0x00ff_ffff) | (stage << 24)]
//! ```
//!
//! Each block yields four `u32` words, consumed low word first; a `u64` draw
//! is `(w1 << 32) | w0`. Uniform floats take the top 53 bits. Normal draws use
//! Box–Muller on two uniforms (cosine branch only), evaluated with `libm`.
//!
//! Draws therefore do not depend on evaluation order, thread count or
//! platform. Known-answer vectors live in the tests below.

use core::f64::consts::PI;

const M0: u32 = 0xD251_1F53;
const M1: u32 = 0xCD9E_8D57;
const W0: u32 = 0x9E37_79B9;
const W1: u32 = 0xBB67_AE85;

#[inline]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let p = u64::from(a) * u64::from(b);
    ((p >> 32) as u32, p as u32)
}

#[inline]
fn round(ctr: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let (hi0, lo0) = mulhilo(M0, ctr[0]);
    let (hi1, lo1) = mulhilo(M1, ctr[2]);
    [hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0]
}

/// The Philox4x32 bijection with 10 rounds.
pub fn philox4x32_10(mut ctr: [u32; 4], mut key: [u32; 2]) -> [u32; 4] {
    for i in 0..10 {
        if i > 0 {
            key[0] = key[0].wrapping_add(W0);
            key[1] = key[1].wrapping_add(W1);
        }
        ctr = round(ctr, key);
    }
    ctr
}

/// Pipeline stage a draw belongs to. The discriminant is part of the stream key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Stage {
    RangeNoise = 0,
    Obstruction = 1,
    Attenuation = 2,
    Clutter = 3,
    SunNoise = 4,
    /// Free for tests and tools; never used by the pipeline.
    Test = 255,
}

/// Seed and frame part of a stream address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub frame_id: u64,
}

impl StreamKey {
    pub fn new(seed: u64, frame_id: u64) -> Self {
        Self { seed, frame_id }
    }

    pub fn stream(&self, beam_index: u32, stage: Stage) -> RngStream {
        rng_stream(self.seed, self.frame_id, beam_index, stage)
    }
}

/// An independent random stream. Cheap to create; holds one Philox block.
#[derive(Debug, Clone)]
pub struct RngStream {
    key: [u32; 2],
    ctr: [u32; 4],
    block: [u32; 4],
    used: usize,
}

pub fn rng_stream(seed: u64, frame_id: u64, beam_index: u32, stage: Stage) -> RngStream {
    let key = [seed as u32, (seed >> 32) as u32];
    let hi = ((frame_id >> 32) as u32 & 0x00ff_ffff) | ((stage as u32) << 24);
    RngStream { key, ctr: [0, beam_index, frame_id as u32, hi], block: [0; 4], used: 4 }
}

impl RngStream {
    pub fn next_u32(&mut self) -> u32 {
        if self.used == 4 {
            self.block = philox4x32_10(self.ctr, self.key);
            self.ctr[0] = self.ctr[0].wrapping_add(1);
            self.used = 0;
        }
        let w = self.block[self.used];
        self.used += 1;
        w
    }

    pub fn next_u64(&mut self) -> u64 {
        let lo = u64::from(self.next_u32());
        let hi = u64::from(self.next_u32());
        (hi << 32) | lo
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`; returns `lo` when the interval is empty.
    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        let u = self.uniform();
        if hi <= lo {
            return lo;
        }
        lo + (hi - lo) * u
    }

    /// Standard normal draw.
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * PI * u2)
    }

    pub fn normal(&mut self, mean: f64, sigma: f64) -> f64 {
        mean + sigma * self.standard_normal()
    }
}
