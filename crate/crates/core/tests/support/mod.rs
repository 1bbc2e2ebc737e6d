//! Shared test fixtures: independent reference computations and the worked
//! examples for every test family.
#![allow(dead_code)]

use std::sync::OnceLock;

use bitchaos::bits::BitStream;
use bitchaos::fxp::FxWord;
use bitchaos::generators::{GeneratorKind, GeneratorSpec, REFERENCE_MASTER_SEED};
use bitchaos::sts::{
    cusum, entropy, excursions, frequency, linear_complexity, rank, runs, spectral, templates, universal, Family,
};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// First 100 binary digits of pi, as used by the standard's examples.
pub const PI_100: &str =
    "1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000";

pub fn ascii(text: &str) -> BitStream {
    BitStream::from_ascii(text).expect("valid ascii bits")
}

/// Binary splitting for `sum_{k=a+1}^{b} 1 / ((a+1)(a+2)...k)`.
fn split(a: u64, b: u64) -> (BigUint, BigUint) {
    if b - a == 1 {
        return (BigUint::one(), BigUint::from(b));
    }
    let m = (a + b) / 2;
    let (p1, q1) = split(a, m);
    let (p2, q2) = split(m, b);
    (p1 * &q2 + p2, q1 * q2)
}

/// The first `n` bits of the binary expansion of e, integer part included
/// (`10.1011011111...`).
pub fn e_bits_of_length(n: usize) -> BitStream {
    // enough terms that the tail is below 2^-(n + 64)
    let mut terms = 1u64;
    let mut log2_fact = 0.0f64;
    while log2_fact < n as f64 + 64.0 {
        terms += 1;
        log2_fact += (terms as f64).log2();
    }
    let (p, q) = split(0, terms);
    let scaled = ((&q + p) << (n - 2)) / q;
    let text = scaled.to_str_radix(2);
    assert_eq!(text.len(), n);
    ascii(&text)
}

/// The standard's one-million-bit sample of e.
pub fn e_bits() -> &'static BitStream {
    static E: OnceLock<BitStream> = OnceLock::new();
    E.get_or_init(|| e_bits_of_length(1_000_000))
}

pub fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

/// Logistic step in unbounded integers: `floor(g * floor(x (2^n - x) / 2^n) / 2^(n-2))`
/// with `2^n - x` taken mod `2^n`.
pub fn oracle_step(x: &BigUint, g: &BigUint, n: u32) -> BigUint {
    let modulus = BigUint::one() << n;
    let one_minus = (&modulus - x) % &modulus;
    let t = (x * one_minus) >> n;
    let next = (g * t) >> (n - 2);
    assert!(next < modulus, "oracle result out of range");
    next
}

/// The full dynamical pipeline over unbounded integers, written directly
/// from the definition: LCG-drawn run lengths, gamma rotation, LSB output.
pub struct OracleDynamical {
    n: u32,
    x: BigUint,
    gammas: Vec<BigUint>,
    k_min: u64,
    k_max: u64,
    lcg: BigUint,
    index: usize,
    left: u64,
}

impl OracleDynamical {
    pub fn new(n: u32, x0: u64, gammas: &[u64], k_min: u32, k_max: u32, partition_seed: u32) -> Self {
        let mut o = Self {
            n,
            x: BigUint::from(x0),
            gammas: gammas.iter().map(|&g| BigUint::from(g)).collect(),
            k_min: k_min as u64,
            k_max: k_max as u64,
            lcg: BigUint::from(partition_seed),
            index: 0,
            left: 0,
        };
        o.left = o.draw();
        o
    }

    fn draw(&mut self) -> u64 {
        let modulus = BigUint::one() << 31u32;
        self.lcg = (&self.lcg * BigUint::from(1_103_515_245u64) + BigUint::from(12_345u64)) % modulus;
        let out: u64 = (&self.lcg >> 16u32).try_into().unwrap();
        self.k_min + out % (self.k_max - self.k_min + 1)
    }

    /// Next state word and its output bit.
    pub fn next(&mut self) -> (BigUint, bool) {
        self.x = oracle_step(&self.x, &self.gammas[self.index], self.n);
        self.left -= 1;
        if self.left == 0 {
            self.index = (self.index + 1) % self.gammas.len();
            self.left = self.draw();
        }
        let bit = !(&self.x % 2u32).is_zero();
        (self.x.clone(), bit)
    }
}

/// One family's worked example: the computed p-values and the published
/// ones.
pub struct WorkedExample {
    pub family: Family,
    pub name: &'static str,
    pub compute: fn() -> Vec<f64>,
    pub expected: &'static [f64],
}

pub const WORKED_TOLERANCE: f64 = 1e-4;

pub fn worked_examples() -> Vec<WorkedExample> {
    vec![
        WorkedExample {
            family: Family::Frequency,
            name: "frequency 1011010101",
            compute: || frequency::frequency(&ascii("1011010101")).unwrap().p_values,
            expected: &[0.527089],
        },
        WorkedExample {
            family: Family::Frequency,
            name: "frequency pi 100",
            compute: || frequency::frequency(&ascii(PI_100)).unwrap().p_values,
            expected: &[0.109599],
        },
        WorkedExample {
            family: Family::BlockFrequency,
            name: "block frequency 0110011010 M=3",
            compute: || frequency::block_frequency(&ascii("0110011010"), 3).unwrap().p_values,
            expected: &[0.801252],
        },
        WorkedExample {
            family: Family::BlockFrequency,
            name: "block frequency pi 100 M=10",
            compute: || frequency::block_frequency(&ascii(PI_100), 10).unwrap().p_values,
            expected: &[0.706438],
        },
        WorkedExample {
            family: Family::CumulativeSums,
            name: "cumulative sums 1011010111 forward",
            compute: || vec![cusum::cumulative_sums(&ascii("1011010111")).unwrap().p_values[0]],
            expected: &[0.4116588],
        },
        WorkedExample {
            family: Family::CumulativeSums,
            name: "cumulative sums pi 100",
            compute: || cusum::cumulative_sums(&ascii(PI_100)).unwrap().p_values,
            expected: &[0.219194, 0.114866],
        },
        WorkedExample {
            family: Family::Runs,
            name: "runs 1001101011",
            compute: || runs::runs(&ascii("1001101011")).unwrap().p_values,
            expected: &[0.147232],
        },
        WorkedExample {
            family: Family::Runs,
            name: "runs pi 100",
            compute: || runs::runs(&ascii(PI_100)).unwrap().p_values,
            expected: &[0.500798],
        },
        WorkedExample {
            family: Family::LongestRun,
            name: "longest run 128 bits M=8",
            compute: || {
                let bits = ascii(concat!(
                    "11001100000101010110110001001100111000000000001001001101010100010001",
                    "001111010110100000001101011111001100111001101101100010110010"
                ));
                runs::longest_run(&bits).unwrap().p_values
            },
            expected: &[0.180609],
        },
        WorkedExample {
            family: Family::Rank,
            name: "rank e first 100000",
            compute: || rank::rank(&e_bits().slice(0, 100_000), 32, 32).unwrap().p_values,
            expected: &[0.532069],
        },
        WorkedExample {
            family: Family::Rank,
            name: "rank e",
            compute: || rank::rank(e_bits(), 32, 32).unwrap().p_values,
            expected: &[0.306156],
        },
        WorkedExample {
            family: Family::Fft,
            name: "spectral e",
            compute: || spectral::spectral(e_bits()).unwrap().p_values,
            expected: &[0.847187],
        },
        WorkedExample {
            family: Family::NonOverlappingTemplate,
            name: "non-overlapping 10100100101110010110 B=001 N=2",
            compute: || {
                let t = templates::Template::parse("001").unwrap();
                templates::non_overlapping(&ascii("10100100101110010110"), &[t], 2)
                    .unwrap()
                    .p_values
            },
            expected: &[0.344154],
        },
        WorkedExample {
            family: Family::OverlappingTemplate,
            name: "overlapping e m=9 M=1032 K=5",
            compute: || templates::overlapping(e_bits(), 9, 1032, 5).unwrap().p_values,
            expected: &[0.110434],
        },
        WorkedExample {
            family: Family::Universal,
            name: "universal e L=7 Q=1280",
            compute: || universal::universal(e_bits()).unwrap().p_values,
            expected: &[0.282568],
        },
        WorkedExample {
            family: Family::ApproximateEntropy,
            name: "approximate entropy 0100110101 m=3",
            compute: || entropy::approximate_entropy(&ascii("0100110101"), 3).unwrap().p_values,
            expected: &[0.261961],
        },
        WorkedExample {
            family: Family::ApproximateEntropy,
            name: "approximate entropy pi 100 m=2",
            compute: || entropy::approximate_entropy(&ascii(PI_100), 2).unwrap().p_values,
            expected: &[0.235301],
        },
        WorkedExample {
            family: Family::RandomExcursions,
            name: "random excursions e",
            compute: || excursions::random_excursions(e_bits()).unwrap().p_values,
            expected: &[
                0.573306, 0.197996, 0.164011, 0.007779, 0.786868, 0.440912, 0.797854, 0.778186,
            ],
        },
        WorkedExample {
            family: Family::RandomExcursionsVariant,
            name: "random excursions variant e",
            compute: || excursions::random_excursions_variant(e_bits()).unwrap().p_values,
            expected: &[
                0.858946, 0.794755, 0.576249, 0.493417, 0.633873, 0.917283, 0.934708, 0.816012, 0.826009, 0.137861,
                0.200642, 0.441254, 0.939291, 0.505683, 0.445935, 0.512207, 0.538635, 0.593930,
            ],
        },
        WorkedExample {
            family: Family::Serial,
            name: "serial 0011011101 m=3",
            compute: || entropy::serial(&ascii("0011011101"), 3).unwrap().p_values,
            expected: &[0.808792, 0.670320],
        },
        WorkedExample {
            family: Family::Serial,
            name: "serial e m=2",
            compute: || entropy::serial(e_bits(), 2).unwrap().p_values,
            expected: &[0.843764, 0.561915],
        },
        WorkedExample {
            family: Family::Serial,
            name: "serial e m=16",
            compute: || entropy::serial(e_bits(), 16).unwrap().p_values,
            expected: &[0.766182, 0.462921],
        },
        WorkedExample {
            family: Family::LinearComplexity,
            name: "linear complexity e M=1000",
            compute: || linear_complexity::linear_complexity(e_bits(), 1000).unwrap().p_values,
            expected: &[0.845406],
        },
        WorkedExample {
            family: Family::Frequency,
            name: "frequency e",
            compute: || frequency::frequency(e_bits()).unwrap().p_values,
            expected: &[0.953749],
        },
        WorkedExample {
            family: Family::CumulativeSums,
            name: "cumulative sums e",
            compute: || cusum::cumulative_sums(e_bits()).unwrap().p_values,
            expected: &[0.669886, 0.724265],
        },
        WorkedExample {
            family: Family::Runs,
            name: "runs e",
            compute: || runs::runs(e_bits()).unwrap().p_values,
            expected: &[0.561917],
        },
        WorkedExample {
            family: Family::LongestRun,
            name: "longest run e M=10000",
            compute: || runs::longest_run(e_bits()).unwrap().p_values,
            expected: &[0.718945],
        },
    ]
}

/// Runs one example; `Err` describes the first mismatch.
pub fn check_worked_example(ex: &WorkedExample) -> Result<(), String> {
    let got = (ex.compute)();
    if got.len() != ex.expected.len() {
        return Err(format!(
            "{}: {} p-values, expected {}",
            ex.name,
            got.len(),
            ex.expected.len()
        ));
    }
    for (i, (g, w)) in got.iter().zip(ex.expected).enumerate() {
        if !close(*g, *w, WORKED_TOLERANCE) {
            return Err(format!("{}: p[{i}] = {g:.6}, expected {w:.6}", ex.name));
        }
    }
    Ok(())
}

/// Moduli of the first `n / 2` DFT coefficients of the +-1 sequence by the
/// O(n^2) definition.
pub fn direct_magnitudes(bits: &BitStream) -> Vec<f64> {
    let n = bits.len();
    let x: Vec<f64> = bits.iter().map(|b| if b { 1.0 } else { -1.0 }).collect();
    let (cos, sin): (Vec<f64>, Vec<f64>) = (0..n)
        .map(|i| {
            let a = -2.0 * std::f64::consts::PI * i as f64 / n as f64;
            (a.cos(), a.sin())
        })
        .unzip();
    (0..n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (j, v) in x.iter().enumerate() {
                let idx = (j * k) % n;
                re += v * cos[idx];
                im += v * sin[idx];
            }
            (re * re + im * im).sqrt()
        })
        .collect()
}

/// `len` bits of the impulse response of the LFSR with connection
/// polynomial `1 + c_1 x + ... + c_{L-1} x^{L-1} + x^L`, where bit `i - 1`
/// of `taps` is `c_i`. The sequence has linear complexity exactly `L`.
pub fn planted_lfsr(taps: u64, l: usize, len: usize) -> Vec<u8> {
    let mut s = vec![0u8; len.max(l)];
    s[l - 1] = 1;
    for t in l..len {
        let mut v = s[t - l];
        for i in 1..l {
            if (taps >> (i - 1)) & 1 == 1 {
                v ^= s[t - i];
            }
        }
        s[t] = v;
    }
    s.truncate(len);
    s
}

/// `(mu, lambda)` by recording the first visit of every state. `f` must map
/// `0..size` into itself.
pub fn enumerate_rho(f: impl Fn(u64) -> u64, x0: u64, size: usize) -> (u64, u64) {
    let mut first_seen = vec![u64::MAX; size];
    let mut x = x0;
    let mut i = 0u64;
    loop {
        let seen = first_seen[x as usize];
        if seen != u64::MAX {
            return (seen, i - seen);
        }
        first_seen[x as usize] = i;
        x = f(x);
        i += 1;
    }
}

/// Floyd's tortoise-and-hare.
pub fn floyd_rho(f: impl Fn(u64) -> u64, x0: u64) -> (u64, u64) {
    let mut tortoise = f(x0);
    let mut hare = f(f(x0));
    while tortoise != hare {
        tortoise = f(tortoise);
        hare = f(f(hare));
    }
    let mut mu = 0;
    tortoise = x0;
    while tortoise != hare {
        tortoise = f(tortoise);
        hare = f(hare);
        mu += 1;
    }
    let mut lambda = 1;
    hare = f(tortoise);
    while tortoise != hare {
        hare = f(hare);
        lambda += 1;
    }
    (mu, lambda)
}

/// Output of each reference generator computed from its definition alone.
pub fn oracle_prefix(kind: GeneratorKind, bits: usize) -> BitStream {
    let spec = GeneratorSpec::reference(kind, REFERENCE_MASTER_SEED).unwrap();
    match spec {
        GeneratorSpec::Dynamical { seed } => {
            let cfg = seed.resolve().unwrap();
            let gammas: Vec<u64> = cfg.gammas.iter().map(FxWord::raw).collect();
            let mut o = OracleDynamical::new(32, cfg.x0.raw(), &gammas, cfg.k_min, cfg.k_max, cfg.partition_seed);
            (0..bits).map(|_| o.next().1).collect()
        }
        GeneratorSpec::Logistic { word_length, x0, gamma } => {
            let x0 = u64::from_str_radix(x0.trim_start_matches("0x"), 16).unwrap();
            let g = u64::from_str_radix(gamma.trim_start_matches("0x"), 16).unwrap();
            // a single gamma makes the switching schedule irrelevant
            let mut o = OracleDynamical::new(word_length, x0, &[g], 1, 1, 1);
            (0..bits).map(|_| o.next().1).collect()
        }
        GeneratorSpec::Lfsr32 { seed } => {
            // a_{t+32} = a_{t+22} + a_{t+2} + a_{t+1} + a_t over GF(2), a_i = seed bit i
            let mut a: Vec<bool> = (0..32).map(|i| (seed >> i) & 1 == 1).collect();
            while a.len() < bits {
                let t = a.len() - 32;
                a.push(a[t + 22] ^ a[t + 2] ^ a[t + 1] ^ a[t]);
            }
            a.truncate(bits);
            a.into_iter().collect()
        }
        GeneratorSpec::Glibc { seed, .. } => {
            let modulus = BigUint::from(1u64 << 31);
            let mut s = BigUint::from(seed);
            let mut out = BitStream::new();
            while out.len() < bits {
                s = (&s * BigUint::from(1_103_515_245u64) + BigUint::from(12_345u64)) % &modulus;
                let text = format!("{:031b}", u64::try_from(&s).unwrap());
                out.extend(text.chars().map(|c| c == '1'));
            }
            out.slice(0, bits)
        }
        GeneratorSpec::Splitmix { .. } => unreachable!("not a golden-vector generator"),
    }
}

pub const GOLDEN_KINDS: [GeneratorKind; 5] = [
    GeneratorKind::Dynamical,
    GeneratorKind::Logistic32,
    GeneratorKind::Logistic64,
    GeneratorKind::Lfsr32,
    GeneratorKind::Glibc,
];

/// First 256 output bits of each reference generator, MSB-first hex.
pub const GOLDEN_PREFIXES: [&str; 5] = [
    "e0c17312176ff7ddd37bf8d3966a0c2b1c60ba422ab1d0103437c15fea2411d7",
    "e0e09e8f1bdc406c533b004512fc465d71661d57bbe38682f12e564aa348d2e1",
    "b80de601035aafeb496e8fefc30927075095b65709e926632ad02bbbfac9bd67",
    "6344986832d37dc7edc30197e4b028ed8471c6f1211d179203d3921a8d999823",
    "3c7082c1c87d1865781536f40ace0bf11a027194354ab549c729753bd8c9db86",
];
