//! Closed forms for the moduli-space integrals entering the localization
//! contributions, and the combinatorial function `H_r`.
//!
//! * `∫_{M̄_{0,r}} 1/Π(w_i - ψ_i) = (Σ 1/w_i)^{r-3} / Π w_i`, extended to
//!   `r = 1, 2` by the same formula;
//! * `∫_{M̄_{1,r}} λ_1/Π(w_k - ψ_k) = (Σ 1/w_k)^{r-1} / (24 Π w_k)`;
//! * `F_r(w) = ∫_{M̄_{1,r}} 1/Π(1 - w_k ψ_k)`, computed as the degree-`r`
//!   part of `H_r` and checked against string/dilaton reduction;
//! * the blow-up integral `|I|^{|J|} (|I|-1)! / 24`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::algebra::rational::{factorial_q, pow, product, q, qf, Q};
use crate::algebra::series::TruncSeries;
use crate::error::{Error, Result};
use crate::graphs::colored_partitions;

fn inverse_sum(w: &[Q]) -> Result<Q> {
    let mut s = Q::zero();
    for x in w {
        if x.is_zero() {
            return Err(Error::Degenerate("zero weight in a formal integral".into()));
        }
        s += x.recip();
    }
    Ok(s)
}

fn weight_product(w: &[Q]) -> Result<Q> {
    let p = product(w);
    if p.is_zero() {
        return Err(Error::Degenerate("zero weight in a formal integral".into()));
    }
    Ok(p)
}

/// `(Σ 1/w_i)^{r-3} / Π w_i` for `r ≥ 1` weights.
pub fn genus0_formal(w: &[Q]) -> Result<Q> {
    if w.is_empty() {
        return Err(Error::Precondition(
            "genus-zero formal integral needs at least one leg".into(),
        ));
    }
    let s = inverse_sum(w)?;
    Ok(pow(&s, w.len() as i64 - 3, "Σ 1/w at a low-valence vertex")? / weight_product(w)?)
}

/// Genus-zero formal integral with `|I| = w.len()` weighted legs and
/// `j_count` extra legs carrying classes pulled back along the maps
/// forgetting them: `(Σ_I 1/w)^{|J|} · (Σ_I 1/w)^{|I|-3} / Π_I w`.
///
/// Each pulled-back leg contributes one factor `Σ_I 1/w` by the string
/// equation, so `j_count = 0` is [`genus0_formal`].
pub fn genus0_with_pulled_legs(w: &[Q], j_count: usize) -> Result<Q> {
    if w.is_empty() {
        return Err(Error::Precondition(
            "pulled-leg integral needs at least one weighted leg".into(),
        ));
    }
    let s = inverse_sum(w)?;
    Ok(pow(
        &s,
        j_count as i64 + w.len() as i64 - 3,
        "Σ 1/w with pulled legs",
    )? / weight_product(w)?)
}

/// `∫ λ_1 / Π(w_k - ψ_k) = (Σ 1/w_k)^{r-1} / (24 Π w_k)`.
pub fn genus1_lambda_integral(w: &[Q]) -> Result<Q> {
    if w.is_empty() {
        return Err(Error::Precondition("λ_1 integral needs r ≥ 1".into()));
    }
    let s = inverse_sum(w)?;
    Ok(pow(&s, w.len() as i64 - 1, "Σ 1/w")? / (q(24) * weight_product(w)?))
}

/// `|I|^{|J|} (|I| - 1)! / 24`.
pub fn blowup_psi_integral(i_count: usize, j_count: usize) -> Result<Q> {
    if i_count == 0 {
        return Err(Error::Precondition("blow-up integral needs |I| ≥ 1".into()));
    }
    Ok(num_traits::pow(q(i_count as i64), j_count) * factorial_q(i_count as u64 - 1) / q(24))
}

/// The graded pieces of `H_r(t·w)` as a series in `t` through `t^r`:
/// entry `p` is the homogeneous degree-`p` part of `H_r` evaluated at `w`.
///
/// `H_r(w) = Σ_m ((-1)^m / 24m) Σ_{I ∈ 𝒜_m([r])} Π_s (1 + Σ_{j∈I_s} w_j)^{|I_s|-2}`.
pub fn h_graded(w: &[Q]) -> TruncSeries {
    let r = w.len();
    let idx: Vec<usize> = (0..r).collect();
    let mut total = TruncSeries::zero('t', r);
    for m in 1..=r.max(1) {
        let coef = if m % 2 == 0 {
            qf(1, 24 * m as i64)
        } else {
            qf(-1, 24 * m as i64)
        };
        let mut acc = TruncSeries::zero('t', r);
        for part in colored_partitions(&idx, m, false) {
            let mut term = TruncSeries::one('t', r);
            for block in &part.blocks {
                let sigma: Q = block.iter().map(|&j| w[j].clone()).sum();
                let factor =
                    TruncSeries::linear_power('t', &Q::one(), &sigma, block.len() as i64 - 2, r)
                        .expect("constant term one");
                term = &term * &factor;
            }
            acc = &acc + &term;
        }
        total = &total + &acc.scale(&coef);
    }
    total
}

/// `H_r(w)` evaluated exactly. Fails when some block sum `1 + Σ w_j`
/// vanishes while carrying a negative exponent.
pub fn h_poly(w: &[Q]) -> Result<Q> {
    let r = w.len();
    let idx: Vec<usize> = (0..r).collect();
    let mut total = Q::zero();
    for m in 1..=r.max(1) {
        let mut acc = Q::zero();
        for part in colored_partitions(&idx, m, false) {
            let mut term = Q::one();
            for block in &part.blocks {
                let base: Q = Q::one() + block.iter().map(|&j| w[j].clone()).sum::<Q>();
                term *= pow(&base, block.len() as i64 - 2, "1 + Σ w in H_r")?;
            }
            acc += term;
        }
        let sign = if m % 2 == 0 { Q::one() } else { -Q::one() };
        total += sign * acc / q(24 * m as i64);
    }
    Ok(total)
}

/// `F_r(w)`: the degree-`r` part of `H_r` at `w`.
pub fn genus1_npoint(w: &[Q]) -> Q {
    h_graded(w).coeff(w.len()).clone()
}

fn oracle_cache() -> &'static RwLock<HashMap<Vec<u32>, Q>> {
    static CACHE: OnceLock<RwLock<HashMap<Vec<u32>, Q>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `⟨τ_{a_1} ⋯ τ_{a_r}⟩_1` by string and dilaton reduction down to
/// `⟨τ_1⟩_1 = 1/24`. Requires `Σ a_i = r`.
pub fn genus1_psi_oracle(a: &[u32]) -> Result<Q> {
    let r = a.len();
    if r == 0 || a.iter().map(|&x| x as usize).sum::<usize>() != r {
        return Err(Error::DimensionMismatch(format!(
            "Σ a_i must equal r = {r} on M̄_(1,r), got {a:?}"
        )));
    }
    let mut key = a.to_vec();
    key.sort_unstable();
    if let Some(v) = oracle_cache().read().expect("oracle cache lock").get(&key) {
        return Ok(v.clone());
    }
    let value = if r == 1 {
        qf(1, 24)
    } else if key[0] == 0 {
        // String: ⟨τ_0 Π τ_{b}⟩ = Σ_j ⟨τ_{b_j - 1} Π_{i≠j} τ_{b_i}⟩.
        let rest = &key[1..];
        let mut s = Q::zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut b = rest.to_vec();
                b[j] -= 1;
                s += genus1_psi_oracle(&b)?;
            }
        }
        s
    } else {
        // Σ a = r with all a ≥ 1 forces every a = 1; dilaton:
        // ⟨τ_1 X⟩_1 = (2g - 2 + |X|) ⟨X⟩_1 = |X| ⟨X⟩_1.
        let pos = key
            .iter()
            .position(|&x| x == 1)
            .expect("some exponent equals one");
        let mut rest = key.clone();
        rest.remove(pos);
        q(rest.len() as i64) * genus1_psi_oracle(&rest)?
    };
    oracle_cache()
        .write()
        .expect("oracle cache lock")
        .insert(key, value.clone());
    Ok(value)
}

/// All exponent vectors of length `r` with entries summing to `total`.
pub fn exponent_vectors(r: usize, total: u32) -> Vec<Vec<u32>> {
    if r == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in exponent_vectors(r - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `F_r(w) = Σ_a ⟨τ_a⟩_1 Π w^a` assembled from the string/dilaton oracle.
pub fn genus1_npoint_oracle(w: &[Q]) -> Result<Q> {
    let r = w.len();
    let mut s = Q::zero();
    for a in exponent_vectors(r, r as u32) {
        let mut t = genus1_psi_oracle(&a)?;
        for (x, &k) in w.iter().zip(&a) {
            t *= num_traits::pow(x.clone(), k as usize);
        }
        s += t;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_zero_low_valence() {
        assert_eq!(genus0_formal(&[q(5)]).unwrap(), q(5));
        assert_eq!(genus0_formal(&[q(2), q(3)]).unwrap(), qf(1, 5));
        assert_eq!(genus0_formal(&[q(2), q(3), q(7)]).unwrap(), qf(1, 42));
        assert!(genus0_formal(&[q(2), q(-2)]).unwrap_err().is_degenerate());
    }

    #[test]
    fn pulled_legs_follow_string_equation() {
        let w = [q(2), q(3), q(-7), q(5)];
        let s: Q = w.iter().map(|x| x.recip()).sum();
        assert_eq!(
            genus0_with_pulled_legs(&w, 0).unwrap(),
            genus0_formal(&w).unwrap()
        );
        assert_eq!(
            genus0_with_pulled_legs(&w, 1).unwrap(),
            &s * genus0_formal(&w).unwrap()
        );
        assert_eq!(genus0_with_pulled_legs(&[q(4)], 0).unwrap(), q(4));
    }

    #[test]
    fn small_h_values() {
        let w = q(3);
        assert_eq!(
            h_poly(std::slice::from_ref(&w)).unwrap(),
            -(q(24) * (q(1) + &w)).recip()
        );
        let (a, b) = (q(2), qf(1, 3));
        let expect = qf(-1, 24) + (q(24) * (q(1) + &a) * (q(1) + &b)).recip();
        assert_eq!(h_poly(&[a, b]).unwrap(), expect);
    }

    #[test]
    fn oracle_values() {
        assert_eq!(genus1_psi_oracle(&[1]).unwrap(), qf(1, 24));
        assert_eq!(genus1_psi_oracle(&[0, 2]).unwrap(), qf(1, 24));
        assert_eq!(genus1_psi_oracle(&[1, 1]).unwrap(), qf(1, 24));
        assert_eq!(genus1_psi_oracle(&[1, 1, 1]).unwrap(), qf(1, 12));
        assert!(matches!(
            genus1_psi_oracle(&[2, 2]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn one_and_two_point_functions() {
        assert_eq!(genus1_npoint(&[q(7)]), qf(7, 24));
        let (a, b) = (q(2), q(-5));
        assert_eq!(
            genus1_npoint(&[a.clone(), b.clone()]),
            (&a * &a + &b * &b + &a * &b) / q(24)
        );
    }

    #[test]
    fn lambda_and_blowup() {
        assert_eq!(genus1_lambda_integral(&[q(3)]).unwrap(), qf(1, 72));
        assert_eq!(genus1_lambda_integral(&[q(1), q(1)]).unwrap(), qf(1, 12));
        assert_eq!(blowup_psi_integral(1, 0).unwrap(), qf(1, 24));
        assert_eq!(blowup_psi_integral(2, 0).unwrap(), qf(1, 24));
        assert_eq!(blowup_psi_integral(2, 3).unwrap(), qf(1, 3));
    }
}
