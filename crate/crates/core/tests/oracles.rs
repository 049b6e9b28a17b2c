//! Library values against independent fixed-width computations.

use seqfam::exact::{binomial, falling_factorial, factorial, pochhammer};
use seqfam::{table, Family, IntRange, Scalar};

fn s(v: i128) -> Scalar {
    v.to_string().parse().unwrap()
}

#[test]
fn fibonacci_and_pell_columns() {
    let fib = Family::fibonacci();
    let (mut f0, mut f1) = (0i128, 1i128);
    let (mut p0, mut p1) = (0i128, 1i128);
    for n in 0..=30u32 {
        // f1 = F_{n+1}, p1 = P_{n+1}
        assert_eq!(fib.x(n, 1), s(f1), "F_{}", n + 1);
        assert_eq!(fib.x(n, 2), s(p1), "P_{}", n + 1);
        (f0, f1) = (f1, f0 + f1);
        (p0, p1) = (p1, 2 * p1 + p0);
    }
}

#[test]
fn power_and_pochhammer_tables() {
    let n = IntRange::new(1, 12).unwrap();
    let m = IntRange::new(-9, 9).unwrap();
    let pw = table(&Family::power(-1), n, m).unwrap();
    let po = table(&Family::Pochhammer, n, m).unwrap();
    for nn in n.iter() {
        for mm in m.iter() {
            let rising: i128 = (1..=i128::from(nn as i32)).map(|l| i128::from(mm) + l).product();
            assert_eq!(pw.get(nn, mm).unwrap(), &s(i128::from(mm - 1).pow(nn as u32)));
            assert_eq!(po.get(nn, mm).unwrap(), &s(rising));
        }
    }
}

#[test]
fn lucas_q2_closed_form() {
    // L_{n+1}^{(3,2)} = 2^{n+1} - 1
    let f = Family::lucas(2).unwrap();
    for n in 0..=60u32 {
        assert_eq!(f.x(n, 3), s((1i128 << (n + 1)) - 1));
    }
}

#[test]
fn lucas_q1_is_periodic_at_m1() {
    // L_k^{(1,1)}: 0, 1, 1, 0, -1, -1, ...
    let f = Family::lucas(1).unwrap();
    let cycle = [1, 1, 0, -1, -1, 0];
    for n in 0..=40u32 {
        assert_eq!(f.x(n, 1), Scalar::int(cycle[n as usize % 6]));
    }
}

#[test]
fn combinatorial_helpers() {
    let mut row = vec![1i128];
    for a in 1..=60u32 {
        let mut next = vec![1i128; a as usize + 1];
        for k in 1..a as usize {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
        for (k, v) in row.iter().enumerate() {
            assert_eq!(binomial(a, k as i64), s(*v));
        }
        assert_eq!(binomial(a, -1), Scalar::zero());
        assert_eq!(binomial(a, i64::from(a) + 1), Scalar::zero());
    }
    let mut fact = 1i128;
    for n in 0..=30u32 {
        if n > 0 {
            fact *= i128::from(n);
        }
        assert_eq!(factorial(n), s(fact));
        assert_eq!(pochhammer(1, n), s(fact));
        assert_eq!(falling_factorial(30, n).unwrap(), s((31 - i128::from(n)..=30).product()));
    }
    assert!(falling_factorial(3, 4).is_err());
}
