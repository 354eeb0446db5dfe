//! Number formatting for reports.

use dimwit::WitnessKind;

/// Integers without a decimal point, everything else in shortest
/// round-trip form.
pub fn num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Rounds half away from zero to `places` decimals, then formats with that
/// many digits. Integers are printed bare.
pub fn fixed_or_int(v: f64, places: i32) -> String {
    if (v - v.round()).abs() < 1e-12 {
        return format!("{}", v.round() as i64);
    }
    let scale = 10f64.powi(places);
    format!("{:.*}", places as usize, (v * scale).round() / scale)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn fraction(num: u128, den: u128) -> String {
    let g = gcd(num, den).max(1);
    let (p, q) = (num / g, den / g);
    if q == 1 {
        p.to_string()
    } else {
        format!("{p}/{q}")
    }
}

fn isqrt(v: u128) -> Option<u128> {
    let r = (v as f64).sqrt().round() as u128;
    (r.saturating_sub(1)..=r + 1).find(|c| c * c == v)
}

/// Exact symbolic form of the quantum bound.
pub fn exact_quantum_bound(kind: WitnessKind, n: usize, d: usize) -> String {
    let (n, m) = (n as u128, d.min(n) as u128);
    match kind {
        WitnessKind::Guessing => fraction(m, n),
        WitnessKind::Quadratic => fraction(n * n * (m - 1), 2 * m),
        WitnessKind::Linear => {
            // Q² = N³(N−1)(m−1) / (4m)
            let (a, b) = (n * n * n * (n - 1) * (m - 1), 4 * m);
            let g = gcd(a, b).max(1);
            let (a, b) = (a / g, b / g);
            match (isqrt(a), isqrt(b)) {
                (Some(ra), Some(rb)) => fraction(ra, rb),
                _ => format!("sqrt({})", fraction(a, b)),
            }
        }
    }
}

/// Exact form of a classical bound (always rational).
pub fn exact_classical_bound(kind: WitnessKind, n: usize, d: usize, value: f64) -> String {
    match kind {
        WitnessKind::Guessing => fraction(d.min(n) as u128, n as u128),
        _ => num(value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_rounds_half_up() {
        assert_eq!(fixed_or_int(18.375, 2), "18.38");
        assert_eq!(fixed_or_int(49.0 / 3.0, 2), "16.33");
        assert_eq!(fixed_or_int(21.0, 2), "21");
        assert_eq!(fixed_or_int(19.6, 2), "19.60");
    }

    #[test]
    fn exact_forms() {
        assert_eq!(exact_quantum_bound(WitnessKind::Quadratic, 7, 5), "98/5");
        assert_eq!(exact_quantum_bound(WitnessKind::Quadratic, 7, 7), "21");
        assert_eq!(exact_quantum_bound(WitnessKind::Linear, 3, 2), "sqrt(27/4)");
        assert_eq!(exact_quantum_bound(WitnessKind::Linear, 4, 4), "6");
        assert_eq!(exact_quantum_bound(WitnessKind::Guessing, 6, 4), "2/3");
    }

    #[test]
    fn plain_numbers() {
        assert_eq!(num(16.0), "16");
        assert_eq!(num(0.4), "0.4");
    }
}
