//! Berlekamp-Massey over GF(2) with bit-packed polynomials.

/// Linear complexity of `bits` (each entry `0` or `1`): the length of the
/// shortest LFSR that generates the sequence.
pub fn berlekamp_massey(bits: &[u8]) -> usize {
    let n = bits.len();
    if n == 0 {
        return 0;
    }
    let words = n.div_ceil(64) + 1;
    // connection polynomial C(x) and the copy B(x) from the last length change
    let mut c = vec![0u64; words];
    let mut b = vec![0u64; words];
    c[0] = 1;
    b[0] = 1;
    // window[i] holds s_{N-i}: the newest bit at position 0
    let mut window = vec![0u64; words];
    let mut scratch = vec![0u64; words];
    let mut len = 0usize;
    let mut shift = 1usize;

    for (pos, &bit) in bits.iter().enumerate() {
        shl1(&mut window);
        window[0] |= (bit & 1) as u64;

        let active = len / 64 + 1;
        let discrepancy = c[..active]
            .iter()
            .zip(&window[..active])
            .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones())
            & 1;
        if discrepancy == 0 {
            shift += 1;
        } else if 2 * len <= pos {
            scratch.copy_from_slice(&c);
            xor_shifted(&mut c, &b, shift);
            len = pos + 1 - len;
            std::mem::swap(&mut b, &mut scratch);
            shift = 1;
        } else {
            xor_shifted(&mut c, &b, shift);
            shift += 1;
        }
    }
    len
}

fn shl1(v: &mut [u64]) {
    for i in (1..v.len()).rev() {
        v[i] = (v[i] << 1) | (v[i - 1] >> 63);
    }
    v[0] <<= 1;
}

/// `dst ^= src << shift`, truncated to `dst.len()` words.
fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / 64, shift % 64);
    for i in (ws..dst.len()).rev() {
        let j = i - ws;
        let mut v = src[j] << bs;
        if bs != 0 && j > 0 {
            v |= src[j - 1] >> (64 - bs);
        }
        dst[i] ^= v;
    }
}
