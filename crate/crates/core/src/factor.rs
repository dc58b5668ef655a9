//! Integer factorization for the square-free test.
//!
//! Trial division by primes below 10^6, then Pollard–Brent rho on the
//! remaining cofactor. Primality is decided by Miller–Rabin on the first
//! thirteen prime bases, which is a proof below 3.3 * 10^24; above that a
//! strong Lucas test is added (Baillie–PSW).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

const TRIAL_BOUND: u32 = 1_000_000;

static SMALL_PRIMES: Lazy<Vec<u32>> = Lazy::new(|| {
    let n = TRIAL_BOUND as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect()
});

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

static MR_PROOF_BOUND: Lazy<BigUint> = Lazy::new(|| "3317044064679887385961981".parse().expect("constant"));

fn strong_probable_prime(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let mut x = base.modpow(&d, n);
    if x == one || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n1 {
            return true;
        }
    }
    false
}

fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&BigInt::from(4)) == three && n.mod_floor(&BigInt::from(4)) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters; `n` odd, not a square.
fn strong_lucas(n: &BigUint) -> bool {
    let ni = BigInt::from(n.clone());
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, &ni) {
            -1 => break,
            0 if d.magnitude() != n => return false,
            _ => {}
        }
        d = if d.sign() == num_bigint::Sign::Plus { -(d + 2u32) } else { -(d - 2u32) };
    }
    let q: BigInt = (BigInt::one() - &d) / 4u32;
    let m: BigInt = &ni + 1u32;
    let s = m.trailing_zeros().unwrap_or(0);
    let k = &m >> s;
    let half = |x: BigInt| -> BigInt {
        let x = if x.is_odd() { x + &ni } else { x };
        (x >> 1u32).mod_floor(&ni)
    };
    // binary Lucas chain for U_k, V_k
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = q.mod_floor(&ni);
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&ni);
        v = (&v * &v - &qk * 2u32).mod_floor(&ni);
        qk = (&qk * &qk).mod_floor(&ni);
        if k.bit(i) {
            let nu = half(&u + &v);
            let nv = half(&d * &u + &v);
            u = nu;
            v = nv;
            qk = (&qk * &q).mod_floor(&ni);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - &qk * 2u32).mod_floor(&ni);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&ni);
    }
    false
}

pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        for &p in SMALL_PRIMES.iter().take(200) {
            if small == u64::from(p) {
                return true;
            }
            if small % u64::from(p) == 0 {
                return false;
            }
        }
    } else if n.is_even() {
        return false;
    }
    for b in MR_BASES {
        if !strong_probable_prime(n, &BigUint::from(b)) {
            return false;
        }
    }
    if n < &*MR_PROOF_BOUND {
        return true;
    }
    let r = n.sqrt();
    &r * &r != *n && strong_lucas(n)
}

/// Finds a nontrivial factor of an odd composite `n` (Pollard–Brent).
fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 128u64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
    unreachable!("some polynomial constant always splits a composite")
}

fn factor_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let r = n.sqrt();
    if &r * &r == n {
        factor_into(r.clone(), out);
        factor_into(r, out);
        return;
    }
    let d = pollard_brent(&n);
    let e = &n / &d;
    factor_into(d, out);
    factor_into(e, out);
}

/// Complete factorization of `x >= 1` as sorted `(prime, exponent)` pairs.
pub fn factorize(x: &BigUint) -> Result<Vec<(BigUint, u32)>> {
    if x.is_zero() {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let mut n = x.clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for &p in SMALL_PRIMES.iter() {
        let mut e = 0;
        if let Some(small) = n.to_u64() {
            let p = u64::from(p);
            if p * p > small {
                break;
            }
            let mut m = small;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            n = BigUint::from(m);
        } else {
            let pb = BigUint::from(p);
            loop {
                let (q, r) = n.div_rem(&pb);
                if !r.is_zero() {
                    break;
                }
                n = q;
                e += 1;
            }
        }
        if e > 0 {
            out.push((BigUint::from(p), e));
        }
    }
    let mut big = Vec::new();
    factor_into(n, &mut big);
    big.sort();
    for p in big {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// True iff `x` is odd and not divisible by the square of any prime.
pub fn is_odd_square_free(x: &BigUint) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::Domain("square-free test of 0".into()));
    }
    if x.is_even() {
        return Ok(false);
    }
    Ok(factorize(x)?.iter().all(|&(_, e)| e == 1))
}
