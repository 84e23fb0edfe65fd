//! Reproducible, splittable random streams.
//!
//! A [`SeedStream`] names a stream by `(root_seed, stream_index)`. Its 256-bit
//! ChaCha8 key is derived from the pair with the SplitMix64 finalizer:
//!
//! ```text
//! s       = mix(root_seed ^ mix(stream_index ^ 0x9E3779B97F4A7C15))
//! key[i]  = mix(s + (i + 1) · 0x9E3779B97F4A7C15),  i = 0..4 (little-endian)
//! ```
//!
//! Work is cut into fixed chunks of [`CHUNK_SIZE`] draws; chunk `c` of a
//! stream uses ChaCha8's native 64-bit stream selector set to `c`. Chunks are
//! therefore independent of each other and of how they are scheduled, so any
//! number of worker threads reproduces the single-threaded result exactly.

use std::sync::atomic::{AtomicUsize, Ordering};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SeedStream {
    pub root_seed: u64,
    pub stream_index: u64,
}

impl SeedStream {
    pub fn new(root_seed: u64, stream_index: u64) -> Self {
        Self {
            root_seed,
            stream_index,
        }
    }

    /// 64-bit seed summarizing `(root_seed, stream_index)`.
    pub fn sub_seed(&self) -> u64 {
        mix64(self.root_seed ^ mix64(self.stream_index ^ GOLDEN_GAMMA))
    }

    /// A child stream rooted at this stream's sub-seed.
    pub fn child(&self, index: u64) -> SeedStream {
        SeedStream::new(self.sub_seed(), index)
    }

    /// Generator for chunk `chunk` of this stream.
    pub fn chunk_rng(&self, chunk: u64) -> StreamRng {
        let s = self.sub_seed();
        let mut key = [0u8; 32];
        for (i, word) in key.chunks_exact_mut(8).enumerate() {
            let v = mix64(s.wrapping_add((i as u64 + 1).wrapping_mul(GOLDEN_GAMMA)));
            word.copy_from_slice(&v.to_le_bytes());
        }
        let mut inner = ChaCha8Rng::from_seed(key);
        inner.set_stream(chunk);
        StreamRng { inner }
    }
}

impl std::fmt::Display for SeedStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.root_seed, self.stream_index)
    }
}

/// Uniform and Gaussian variates from one chunk of a [`SeedStream`].
///
/// Gaussians come from the Box–Muller transform, which consumes exactly two
/// uniforms per pair of normals.
#[derive(Debug, Clone)]
pub struct StreamRng {
    inner: ChaCha8Rng,
}

impl StreamRng {
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        (radius * c, radius * s)
    }

    /// Fills `out` with independent standard normals. An odd length discards
    /// the last half of a pair.
    pub fn fill_normals(&mut self, out: &mut [f64]) {
        let mut pairs = out.chunks_exact_mut(2);
        for pair in &mut pairs {
            let (a, b) = self.normal_pair();
            pair[0] = a;
            pair[1] = b;
        }
        if let [last] = pairs.into_remainder() {
            *last = self.normal_pair().0;
        }
    }
}

/// Draws per chunk.
pub const CHUNK_SIZE: usize = 8192;

/// Splits `count` draws into chunks, runs `work(rng, chunk_count)` on each
/// (possibly in parallel) and returns the results in chunk order.
pub fn map_chunks<R, F>(count: usize, stream: SeedStream, workers: usize, work: F) -> Vec<R>
where
    R: Send,
    F: Fn(&mut StreamRng, usize) -> R + Sync,
{
    let chunks = count.div_ceil(CHUNK_SIZE);
    let size_of = |c: usize| CHUNK_SIZE.min(count - c * CHUNK_SIZE);
    let run = |c: usize| work(&mut stream.chunk_rng(c as u64), size_of(c));

    let workers = workers.clamp(1, chunks.max(1));
    if workers == 1 {
        return (0..chunks).map(run).collect();
    }

    let next = AtomicUsize::new(0);
    let mut tagged: Vec<(usize, R)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let c = next.fetch_add(1, Ordering::Relaxed);
                        if c >= chunks {
                            break done;
                        }
                        done.push((c, run(c)));
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sampling worker panicked"))
            .collect()
    });
    tagged.sort_unstable_by_key(|(c, _)| *c);
    tagged.into_iter().map(|(_, r)| r).collect()
}

/// Available parallelism, falling back to one worker.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
