//! Codes that can be constructed without an external matrix file.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::LinearCode;
use crate::error::CodeError;
use crate::gf2::BitMatrix;

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &["hamming7", "hamming15", "tanner155", "bch127"];

pub fn by_name(name: &str) -> Result<LinearCode, CodeError> {
    match name {
        "hamming7" | "hamming_7_4" => Ok(hamming_7_4()),
        "hamming15" | "hamming_15_11" => Ok(hamming_15_11()),
        "tanner155" | "tanner_155_64" => Ok(tanner_155_64()),
        "bch127" | "bch_127_85" => Ok(bch_127_85()),
        other => Err(CodeError::UnknownBuiltin(other.to_string())),
    }
}

fn hamming(r: usize, name: &str) -> LinearCode {
    let n = (1 << r) - 1;
    let mut h = BitMatrix::zeros(r, n);
    for col in 0..n {
        for bit in 0..r {
            h.set(bit, col, ((col + 1) >> bit) & 1 == 1);
        }
    }
    LinearCode::from_parity_check(name, h).expect("Hamming codes have k > 0")
}

/// The (7,4) Hamming code; column `i` of `H` is the binary expansion of `i + 1`.
pub fn hamming_7_4() -> LinearCode {
    hamming(3, "hamming7")
}

/// The (15,11) Hamming code.
pub fn hamming_15_11() -> LinearCode {
    hamming(4, "hamming15")
}

/// The (155,64) Tanner code: a 3x5 array of 31x31 circulant permutation
/// matrices, block `(i, j)` shifted by `5^i * 2^j mod 31`.
pub fn tanner_155_64() -> LinearCode {
    const P: usize = 31;
    let mut h = BitMatrix::zeros(3 * P, 5 * P);
    let mut row_exp = 1;
    for bi in 0..3 {
        let mut shift = row_exp;
        for bj in 0..5 {
            for r in 0..P {
                h.set(bi * P + r, bj * P + (r + shift) % P, true);
            }
            shift = shift * 2 % P;
        }
        row_exp = row_exp * 5 % P;
    }
    LinearCode::from_parity_check("tanner155", h).expect("Tanner code has k = 64")
}

/// Multiplication in GF(2^7) modulo the primitive polynomial x^7 + x^3 + 1.
fn gf128_mul(a: u8, b: u8) -> u8 {
    let (mut a, mut b, mut acc) = (a as u16, b as u16, 0u16);
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & 0x80 != 0 {
            a ^= 0x89;
        }
    }
    acc as u8
}

fn gf128_pow(mut base: u8, mut e: usize) -> u8 {
    let mut acc = 1u8;
    while e > 0 {
        if e & 1 == 1 {
            acc = gf128_mul(acc, base);
        }
        base = gf128_mul(base, base);
        e >>= 1;
    }
    acc
}

/// Minimal polynomial of `alpha^i` over GF(2), coefficients lowest degree first.
fn minimal_polynomial(i: usize) -> Vec<u8> {
    let mut conj = Vec::new();
    let mut e = i % 127;
    while !conj.contains(&e) {
        conj.push(e);
        e = e * 2 % 127;
    }
    // Expand prod (x + alpha^e) over GF(128).
    let mut poly: Vec<u8> = vec![1];
    for &e in &conj {
        let root = gf128_pow(2, e);
        let mut next = vec![0u8; poly.len() + 1];
        for (d, &c) in poly.iter().enumerate() {
            next[d + 1] ^= c;
            next[d] ^= gf128_mul(c, root);
        }
        poly = next;
    }
    assert!(poly.iter().all(|&c| c <= 1), "minimal polynomial must be binary");
    poly
}

fn poly_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 1 {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= y;
            }
        }
    }
    out
}

/// Quotient of `num / den` over GF(2); panics unless the division is exact.
fn poly_div_exact(num: &[u8], den: &[u8]) -> Vec<u8> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0u8; num.len() - dd];
    for d in (dd..num.len()).rev() {
        if rem[d] == 1 {
            q[d - dd] = 1;
            for (j, &c) in den.iter().enumerate() {
                rem[d - dd + j] ^= c;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division must be exact");
    q
}

/// Generator polynomial of the narrow-sense (127,85) BCH code (designed distance 13).
pub fn bch_127_85_generator() -> Vec<u8> {
    let mut g = vec![1u8];
    let mut seen: Vec<Vec<u8>> = Vec::new();
    for i in (1..=11).step_by(2) {
        let m = minimal_polynomial(i);
        if !seen.contains(&m) {
            g = poly_mul(&g, &m);
            seen.push(m);
        }
    }
    g
}

/// The (127,85) BCH code with the 42 x 127 cyclic parity-check matrix built
/// from shifts of the reversed check polynomial `h(x) = (x^127 + 1) / g(x)`.
pub fn bch_127_85() -> LinearCode {
    const N: usize = 127;
    let g = bch_127_85_generator();
    let mut x_n_1 = vec![0u8; N + 1];
    x_n_1[0] = 1;
    x_n_1[N] = 1;
    let hpoly = poly_div_exact(&x_n_1, &g);
    let k = hpoly.len() - 1;
    let mut h = BitMatrix::zeros(N - k, N);
    for i in 0..N - k {
        for j in 0..=k {
            if hpoly[k - j] == 1 {
                h.set(i, i + j, true);
            }
        }
    }
    LinearCode::from_parity_check("bch127", h).expect("BCH code has k = 85")
}

/// A random code with an `m x n` parity-check matrix of full row rank.
pub fn random_code(n: usize, m: usize, seed: u64) -> LinearCode {
    assert!(m < n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut h = BitMatrix::zeros(m, n);
        for r in 0..m {
            for c in 0..n {
                h.set(r, c, rng.random_bool(0.5));
            }
        }
        // Every position must be checked, otherwise weight-1 codewords exist
        // trivially; keep full rank so that k = n - m.
        let covered = (0..n).all(|c| (0..m).any(|r| h.get(r, c)));
        if covered && h.rank() == m {
            return LinearCode::from_parity_check(format!("random{n}x{m}#{seed}"), h).unwrap();
        }
    }
}
