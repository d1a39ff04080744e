//! Clebsch-Gordan coefficients for dipole transitions.
//!
//! Angular momenta are passed doubled (`j2 = 2j`, `m2 = 2m`) so half-integer
//! values stay exact.

fn factorial(n: i32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `⟨j1 m1; j2 m2 | J M⟩` via the Racah formula, all arguments doubled.
pub fn clebsch_gordan(j1: i32, m1: i32, j2: i32, m2: i32, jj: i32, mm: i32) -> f64 {
    if m1 + m2 != mm || m1.abs() > j1 || m2.abs() > j2 || mm.abs() > jj {
        return 0.0;
    }
    if jj < (j1 - j2).abs() || jj > j1 + j2 || (j1 + j2 + jj) % 2 != 0 {
        return 0.0;
    }
    if (j1 + m1) % 2 != 0 || (j2 + m2) % 2 != 0 || (jj + mm) % 2 != 0 {
        return 0.0;
    }
    let h = |x: i32| x / 2;
    let pre = ((jj + 1) as f64 * factorial(h(jj + j1 - j2)) * factorial(h(jj - j1 + j2)) * factorial(h(j1 + j2 - jj))
        / factorial(h(j1 + j2 + jj) + 1))
        .sqrt();
    let norm = (factorial(h(jj + mm))
        * factorial(h(jj - mm))
        * factorial(h(j1 - m1))
        * factorial(h(j1 + m1))
        * factorial(h(j2 - m2))
        * factorial(h(j2 + m2)))
    .sqrt();
    let mut sum = 0.0;
    for k in 0..=h(j1 + j2 + jj) {
        let terms = [
            h(j1 + j2 - jj) - k,
            h(j1 - m1) - k,
            h(j2 + m2) - k,
            h(jj - j2 + m1) + k,
            h(jj - j1 - m2) + k,
        ];
        if terms.iter().any(|&t| t < 0) {
            continue;
        }
        let denom: f64 = factorial(k) * terms.iter().map(|&t| factorial(t)).product::<f64>();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / denom;
    }
    pre * norm * sum
}

/// Dipole matrix-element factor `⟨J_l m_l; 1 q | J_u m_u⟩` for a transition
/// from lower to upper sublevel, `q = m_u − m_l` (doubled arguments).
pub fn dipole_factor(j_lower: i32, m_lower: i32, j_upper: i32, m_upper: i32) -> f64 {
    let q = m_upper - m_lower;
    if q.abs() > 2 {
        return 0.0;
    }
    clebsch_gordan(j_lower, m_lower, 2, q, j_upper, m_upper)
}
