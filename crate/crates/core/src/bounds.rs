//! Size bounds for `(n, k, d)` constant-weight codes.
//!
//! Everything is exact integer arithmetic on checked `u128`; a bound that
//! overflows is reported as an error rather than rounded.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("invalid parameters (n={n}, k={k}, d={d}): {reason}")]
    InvalidParameters {
        n: u64,
        k: u64,
        d: u64,
        reason: &'static str,
    },
    #[error("sphere radius {r} exceeds min(k, n-k) = {max}")]
    RadiusOutOfRange { r: u64, max: u64 },
    #[error("integer overflow evaluating {0}")]
    Overflow(&'static str),
}

/// Result of a bound that only holds under a side condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Applicability {
    Value(u128),
    NotApplicable,
}

impl Applicability {
    pub fn value(self) -> Option<u128> {
        match self {
            Applicability::Value(v) => Some(v),
            Applicability::NotApplicable => None,
        }
    }
}

pub fn binomial(n: u64, k: u64) -> Result<u128, BoundError> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc = C(n, i); C(n, i+1) = acc * (n-i) / (i+1), divided out before
        // multiplying so the intermediate fits whenever the result does.
        let (num, den) = ((n - i) as u128, (i + 1) as u128);
        let g = gcd(acc, den);
        acc = (acc / g)
            .checked_mul(num / (den / g))
            .ok_or(BoundError::Overflow("binomial"))?;
    }
    Ok(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn invalid(n: u64, k: u64, d: u64, reason: &'static str) -> BoundError {
    BoundError::InvalidParameters { n, k, d, reason }
}

/// `1 <= k <= n`, `d` even with `2 <= d <= 2 min(k, n-k)`.
pub fn validate(n: u64, k: u64, d: u64) -> Result<(), BoundError> {
    if k == 0 || k > n {
        return Err(invalid(n, k, d, "need 1 <= k <= n"));
    }
    if n > 128 {
        return Err(invalid(n, k, d, "n above 128 is out of range"));
    }
    if !d.is_multiple_of(2) {
        return Err(invalid(n, k, d, "d must be even"));
    }
    if d < 2 || d > 2 * k.min(n - k) {
        return Err(invalid(n, k, d, "need 2 <= d <= 2 min(k, n-k)"));
    }
    Ok(())
}

/// Number of `k`-subsets within symmetric distance `2r` of a fixed one:
/// `sum_{i=0}^{r} C(k,i) C(n-k,i)`.
pub fn sphere_size(n: u64, k: u64, r: u64) -> Result<u128, BoundError> {
    if k > n {
        return Err(invalid(n, k, 0, "need k <= n"));
    }
    let max = k.min(n - k);
    if r > max {
        return Err(BoundError::RadiusOutOfRange { r, max });
    }
    (0..=r).try_fold(0u128, |acc, i| {
        let term = binomial(k, i)?
            .checked_mul(binomial(n - k, i)?)
            .ok_or(BoundError::Overflow("sphere size"))?;
        acc.checked_add(term).ok_or(BoundError::Overflow("sphere size"))
    })
}

/// `t = floor((r - 1) / 2)` with `r = d / 2`.
fn packing_radius(d: u64) -> u64 {
    (d / 2 - 1) / 2
}

/// `floor(C(n,k) / |S(k,t)|)`.
pub fn sphere_packing_bound(n: u64, k: u64, d: u64) -> Result<u128, BoundError> {
    validate(n, k, d)?;
    Ok(binomial(n, k)? / sphere_size(n, k, packing_radius(d))?)
}

/// `ceil(C(n,k) / |S(k,t+1)|)`: some code of at least this size exists.
pub fn sphere_covering_lower(n: u64, k: u64, d: u64) -> Result<u128, BoundError> {
    validate(n, k, d)?;
    Ok(binomial(n, k)?.div_ceil(sphere_size(n, k, packing_radius(d) + 1)?))
}

/// `C(n - (d-2)/2, max(k, n-k))`, defined for `d > 2`.
pub fn singleton_bound(n: u64, k: u64, d: u64) -> Result<u128, BoundError> {
    validate(n, k, d)?;
    if d <= 2 {
        return Err(invalid(n, k, d, "Singleton-type bound needs d > 2"));
    }
    binomial(n - (d - 2) / 2, k.max(n - k))
}

/// `k^2 - kn + delta*n`.
pub fn johnson1_denominator(n: u64, k: u64, delta: u64) -> i128 {
    let (n, k, delta) = (n as i128, k as i128, delta as i128);
    k * k - k * n + delta * n
}

/// Restricted Johnson bound `floor(delta n / (k^2 - kn + delta n))`, applicable
/// only when the denominator is positive.
pub fn johnson1(n: u64, k: u64, delta: u64) -> Applicability {
    let den = johnson1_denominator(n, k, delta);
    if delta == 0 || den <= 0 {
        return Applicability::NotApplicable;
    }
    Applicability::Value((delta as u128 * n as u128) / den as u128)
}

/// Integer refinement: with `kN = na + b`, `0 <= b < n`, a code of size `N`
/// must satisfy `na(a-1) + 2ab <= (k - delta) N (N - 1)`.
pub fn johnson1_refined_feasible(n: u64, k: u64, delta: u64, size: u64) -> bool {
    let (n, k, delta, size) = (n as i128, k as i128, delta as i128, size as i128);
    let ones = k * size;
    let (a, b) = (ones / n, ones % n);
    n * a * (a - 1) + 2 * a * b <= (k - delta) * size * (size - 1)
}

/// Largest `N` reached by scanning `N = 1, 2, ...` until the refined
/// inequality first fails. Reported only where [`johnson1`] applies, since
/// otherwise the inequality never fails.
pub fn johnson1_refined(n: u64, k: u64, delta: u64) -> Applicability {
    let Applicability::Value(cap) = johnson1(n, k, delta) else {
        return Applicability::NotApplicable;
    };
    let mut size = 1u64;
    while (size as u128) <= cap && johnson1_refined_feasible(n, k, delta, size + 1) {
        size += 1;
    }
    Applicability::Value(size as u128)
}

/// Unrestricted Johnson bound
/// `floor(n/k floor((n-1)/(k-1) ... floor((n-(k-delta))/delta)))`,
/// evaluated innermost-out.
pub fn johnson2(n: u64, k: u64, delta: u64) -> Result<u128, BoundError> {
    if delta == 0 || delta > k || k > n {
        return Err(invalid(n, k, 2 * delta, "need 1 <= delta <= k <= n"));
    }
    let depth = k - delta;
    let mut v = ((n - depth) / delta) as u128;
    for j in (0..depth).rev() {
        v = v
            .checked_mul((n - j) as u128)
            .ok_or(BoundError::Overflow("johnson2"))?
            / (k - j) as u128;
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub kind: BoundKind,
    pub value: Applicability,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u64,
    pub k: u64,
    pub d: u64,
    pub entries: Vec<BoundEntry>,
    /// Minimum over applicable upper bounds, including the trivial `C(n,k)`.
    pub upper: u128,
    /// Sphere-covering existence bound.
    pub lower: u128,
}

impl BoundReport {
    pub fn get(&self, name: &str) -> Option<Applicability> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.value)
    }
}

pub fn bound_report(n: u64, k: u64, d: u64) -> Result<BoundReport, BoundError> {
    validate(n, k, d)?;
    let delta = d / 2;
    let mut entries = Vec::new();
    let mut push = |name: &str, kind, value, note: String| {
        entries.push(BoundEntry {
            name: name.to_string(),
            kind,
            value,
            note,
        })
    };

    let total = binomial(n, k)?;
    push(
        "trivial",
        BoundKind::Upper,
        Applicability::Value(total),
        format!("C({n},{k})"),
    );
    let t = packing_radius(d);
    push(
        "sphere_packing",
        BoundKind::Upper,
        Applicability::Value(sphere_packing_bound(n, k, d)?),
        format!("t = {t}"),
    );
    let lower = sphere_covering_lower(n, k, d)?;
    push(
        "sphere_covering",
        BoundKind::Lower,
        Applicability::Value(lower),
        format!("radius t+1 = {}", t + 1),
    );
    if d > 2 {
        push(
            "singleton",
            BoundKind::Upper,
            Applicability::Value(singleton_bound(n, k, d)?),
            format!("{} punctures", (d - 2) / 2),
        );
    } else {
        push(
            "singleton",
            BoundKind::Upper,
            Applicability::NotApplicable,
            "needs d > 2".into(),
        );
    }
    let den = johnson1_denominator(n, k, delta);
    let j1 = johnson1(n, k, delta);
    push(
        "johnson1",
        BoundKind::Upper,
        j1,
        format!("k^2 - kn + delta n = {den}"),
    );
    push(
        "johnson1_refined",
        BoundKind::Upper,
        johnson1_refined(n, k, delta),
        if j1.value().is_some() {
            "largest N before the integer inequality fails".into()
        } else {
            "needs k^2 - kn + delta n > 0".into()
        },
    );
    push(
        "johnson2",
        BoundKind::Upper,
        Applicability::Value(johnson2(n, k, delta)?),
        "nested floors".into(),
    );

    let upper = entries
        .iter()
        .filter(|e| e.kind == BoundKind::Upper)
        .filter_map(|e| e.value.value())
        .min()
        .unwrap_or(total);
    Ok(BoundReport {
        n,
        k,
        d,
        entries,
        upper,
        lower,
    })
}

/// Best upper bound on the size of an `(n,k,d)` code, also using the bounds
/// for `(n, n-k, d)`: complementing every codeword preserves all distances.
pub fn best_upper_bound(n: u64, k: u64, d: u64) -> Result<u128, BoundError> {
    let direct = bound_report(n, k, d)?.upper;
    let complement = bound_report(n, n - k, d)?.upper;
    Ok(direct.min(complement))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Recursive form `A(n,k,2d) <= floor(n/k A(n-1,k-1,2d))` bottoming out at
    /// `A(n,delta,2delta) <= floor(n/delta)`.
    fn johnson2_recursive(n: u64, k: u64, delta: u64) -> u128 {
        if k == delta {
            (n / delta) as u128
        } else {
            n as u128 * johnson2_recursive(n - 1, k - 1, delta) / k as u128
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 4).unwrap(), 35);
        assert_eq!(binomial(10, 0).unwrap(), 1);
        assert_eq!(binomial(3, 5).unwrap(), 0);
        assert_eq!(binomial(128, 64).unwrap(), 23_951_146_041_928_082_866_135_587_776_380_551_750);
    }

    #[test]
    fn sphere_examples() {
        assert_eq!(sphere_size(9, 4, 0).unwrap(), 1);
        assert_eq!(sphere_size(7, 4, 1).unwrap(), 13);
        assert_eq!(sphere_size(7, 4, 2).unwrap(), 1 + 12 + 6 * 3);
        assert_eq!(sphere_size(7, 4, 4), Err(BoundError::RadiusOutOfRange { r: 4, max: 3 }));
    }

    #[test]
    fn sphere_symmetry_exhaustive() {
        for n in 0..=20 {
            for k in 0..=n {
                for r in 0..=k.min(n - k) {
                    assert_eq!(sphere_size(n, k, r).unwrap(), sphere_size(n, n - k, r).unwrap());
                }
            }
        }
    }

    /// Brute force: count k-subsets (bitmasks) within distance 2r of {0..k-1}.
    #[test]
    fn sphere_size_matches_enumeration() {
        for n in 1..=10u64 {
            for k in 1..=n {
                let center: u32 = (1 << k) - 1;
                for r in 0..=k.min(n - k) {
                    let count = (0u32..1 << n)
                        .filter(|m| m.count_ones() as u64 == k)
                        .filter(|m| (m ^ center).count_ones() as u64 <= 2 * r)
                        .count() as u128;
                    assert_eq!(sphere_size(n, k, r).unwrap(), count);
                }
            }
        }
    }

    #[test]
    fn packing_and_covering() {
        assert_eq!(sphere_packing_bound(7, 4, 4).unwrap(), 35);
        assert_eq!(sphere_covering_lower(7, 4, 4).unwrap(), 3);
        for (n, k) in [(5, 2), (9, 4), (10, 3)] {
            assert_eq!(sphere_packing_bound(n, k, 2).unwrap(), binomial(n, k).unwrap());
        }
        assert!(sphere_packing_bound(7, 4, 3).is_err());
    }

    #[test]
    fn singleton_examples() {
        assert_eq!(singleton_bound(7, 4, 4).unwrap(), 15);
        assert_eq!(singleton_bound(9, 6, 6).unwrap(), 7);
        for (n, k) in [(8, 3), (9, 4), (10, 6)] {
            assert_eq!(singleton_bound(n, k, 4).unwrap(), binomial(n - 1, k.max(n - k)).unwrap());
        }
        assert!(singleton_bound(7, 4, 2).is_err());
    }

    #[test]
    fn johnson1_examples() {
        assert_eq!(johnson1_denominator(7, 4, 2), 2);
        assert_eq!(johnson1(7, 4, 2), Applicability::Value(7));
        assert_eq!(johnson1_denominator(7, 5, 1), -3);
        assert_eq!(johnson1(7, 5, 1), Applicability::NotApplicable);
        assert_eq!(johnson1_denominator(9, 7, 2), 4);
        assert_eq!(johnson1(9, 7, 2), Applicability::Value(4));
    }

    #[test]
    fn refined_examples() {
        assert!(johnson1_refined_feasible(9, 7, 2, 4));
        assert!(!johnson1_refined_feasible(9, 7, 2, 5));
        assert!(johnson1_refined_feasible(9, 3, 2, 1));
        assert_eq!(johnson1_refined(9, 7, 2), Applicability::Value(4));
        assert_eq!(johnson1_refined(7, 4, 2), Applicability::Value(7));
        assert_eq!(johnson1_refined(8, 4, 2), Applicability::NotApplicable);
    }

    #[test]
    fn refined_never_exceeds_johnson1() {
        for n in 2..=30 {
            for k in 1..=n {
                for delta in 1..=k.min(n - k).max(1) {
                    if let Applicability::Value(j1) = johnson1(n, k, delta) {
                        let r = johnson1_refined(n, k, delta).value().unwrap();
                        assert!(r <= j1.max(1), "({n},{k},{delta}): {r} > {j1}");
                    }
                }
            }
        }
    }

    #[test]
    fn johnson2_examples() {
        assert_eq!(johnson2(7, 5, 1).unwrap(), 21);
        assert_eq!(johnson2(8, 4, 2).unwrap(), 14);
        assert_eq!(johnson2(10, 3, 2).unwrap(), 13);
        assert_eq!(johnson2(9, 4, 2).unwrap(), 18);
        assert_eq!(johnson2(10, 7, 2).unwrap(), 22);
        assert!(johnson2(5, 2, 3).is_err());
    }

    #[test]
    fn johnson2_matches_recursion() {
        for n in 1..=40 {
            for k in 1..=n {
                for delta in 1..=k {
                    assert_eq!(johnson2(n, k, delta).unwrap(), johnson2_recursive(n, k, delta));
                }
            }
        }
    }

    #[test]
    fn report_examples() {
        let r = bound_report(7, 4, 4).unwrap();
        assert_eq!(r.upper, 7);
        assert_eq!(r.get("johnson1"), Some(Applicability::Value(7)));
        assert_eq!(r.lower, 3);

        let r = bound_report(8, 4, 4).unwrap();
        assert_eq!(r.get("johnson1"), Some(Applicability::NotApplicable));
        assert_eq!(r.get("johnson2"), Some(Applicability::Value(14)));
        assert_eq!(r.upper, 14);

        for (n, k) in [(7, 5), (9, 4), (6, 3), (10, 1)] {
            let r = bound_report(n, k, 2).unwrap();
            let total = binomial(n, k).unwrap();
            assert_eq!(r.upper, total);
            for e in r.entries.iter().filter(|e| e.kind == BoundKind::Upper) {
                if let Applicability::Value(v) = e.value {
                    assert!(v >= total, "{}: {v}", e.name);
                }
            }
        }
    }

    #[test]
    fn complement_bound() {
        assert_eq!(bound_report(9, 5, 4).unwrap().upper, 25);
        assert_eq!(best_upper_bound(9, 5, 4).unwrap(), 18);
        assert_eq!(best_upper_bound(8, 5, 4).unwrap(), 8);
        assert_eq!(best_upper_bound(10, 7, 4).unwrap(), 13);
    }

    #[test]
    fn validation() {
        assert!(validate(7, 4, 4).is_ok());
        assert!(validate(7, 4, 5).is_err());
        assert!(validate(7, 4, 8).is_err());
        assert!(validate(7, 0, 2).is_err());
        assert!(validate(7, 8, 2).is_err());
    }
}
