//! Sparse multivariate polynomials over exact rational coefficients.
//!
//! Terms are stored as a map from dense exponent vectors to nonzero
//! coefficients. All arithmetic is exact; a compiled `f64` view exists for
//! grid sampling only.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

/// Parse a rational from `n` or `n/d` notation.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().ok()?;
        let d: num_bigint::BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        let n: num_bigint::BigInt = s.parse().ok()?;
        Some(Rational::from_integer(n))
    }
}

/// Canonical `n/d` rendering, denominator always present.
pub fn rational_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sphere radius must be positive")]
    NonPositiveRadius,
    #[error("variable x{var} has nonzero exponent but is not mapped")]
    UnmappedVariable { var: usize },
    #[error("coordinate map sends a variable to {target}, outside the new dimension {new_dim}")]
    TargetOutOfRange { target: usize, new_dim: usize },
    #[error("coordinate map is not injective at target {target}")]
    NonInjectiveMap { target: usize },
    #[error("exponent vector has length {got}, expected {expected}")]
    BadExponentLength { expected: usize, got: usize },
}

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoint {
    coords: Vec<Rational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint { coords }
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        RationalPoint {
            coords: coords.iter().map(|&c| rat(c)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.to_f64().unwrap()).collect()
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(rational_str).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Which side of a sphere the defining polynomial is positive on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereOrientation {
    /// `r^2 - ||x - c||^2`: positive strictly inside the sphere.
    InsidePositive,
    /// `||x - c||^2 - r^2`: positive strictly outside the sphere.
    OutsidePositive,
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Invariants: no stored coefficient is zero and every exponent vector has
/// length `num_vars`. The zero polynomial is the empty term map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        let mut p = Polynomial::zero(num_vars);
        p.add_term(vec![0; num_vars], c);
        p
    }

    /// The monomial `x_i` (0-based index).
    pub fn variable(num_vars: usize, i: usize) -> Self {
        assert!(i < num_vars, "variable index out of range");
        let mut exps = vec![0; num_vars];
        exps[i] = 1;
        let mut p = Polynomial::zero(num_vars);
        p.add_term(exps, Rational::one());
        p
    }

    /// Build from `(exponents, coefficient)` pairs, merging duplicates and
    /// dropping zeros.
    pub fn from_terms(
        num_vars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self, PolyError> {
        let mut p = Polynomial::zero(num_vars);
        for (exps, coeff) in terms {
            if exps.len() != num_vars {
                return Err(PolyError::BadExponentLength {
                    expected: num_vars,
                    got: exps.len(),
                });
            }
            p.add_term(exps, coeff);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.num_vars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero(self.num_vars);
        }
        let mut out = Polynomial::zero(self.num_vars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        let mut out = Polynomial::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &RationalPoint) -> Result<Rational, PolyError> {
        if x.dim() != self.num_vars {
            return Err(PolyError::DimensionMismatch {
                expected: self.num_vars,
                got: x.dim(),
            });
        }
        let mut acc = Rational::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term *= x.coord(i);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Floating-point evaluation; used by the grid oracle only.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.num_vars);
        let mut acc = 0.0;
        for (exps, coeff) in &self.terms {
            let mut term = coeff.to_f64().unwrap();
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term *= x[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Symbolic partial derivative with respect to variable `var`.
    pub fn partial_derivative(&self, var: usize) -> Polynomial {
        assert!(var < self.num_vars, "variable index out of range");
        let mut out = Polynomial::zero(self.num_vars);
        for (exps, coeff) in &self.terms {
            let e = exps[var];
            if e == 0 {
                continue;
            }
            let mut d = exps.clone();
            d[var] = e - 1;
            out.add_term(d, coeff * Rational::from_integer(e.into()));
        }
        out
    }

    /// All first partial derivatives evaluated exactly at `x`.
    pub fn gradient(&self, x: &RationalPoint) -> Result<Vec<Rational>, PolyError> {
        if x.dim() != self.num_vars {
            return Err(PolyError::DimensionMismatch {
                expected: self.num_vars,
                got: x.dim(),
            });
        }
        (0..self.num_vars)
            .map(|v| self.partial_derivative(v).eval(x))
            .collect()
    }

    pub fn gradient_f64(&self, x: &[f64]) -> Vec<f64> {
        (0..self.num_vars)
            .map(|v| self.partial_derivative(v).eval_f64(x))
            .collect()
    }

    /// Polynomial whose zero set is the sphere of the given radius about
    /// `center`, with the requested sign orientation.
    pub fn sphere(
        center: &RationalPoint,
        radius: &Rational,
        ambient_dim: usize,
        orientation: SphereOrientation,
    ) -> Result<Polynomial, PolyError> {
        if center.dim() != ambient_dim {
            return Err(PolyError::DimensionMismatch {
                expected: ambient_dim,
                got: center.dim(),
            });
        }
        if !radius.is_positive() {
            return Err(PolyError::NonPositiveRadius);
        }
        // r^2 - sum (x_i - c_i)^2, expanded term by term.
        let mut p = Polynomial::zero(ambient_dim);
        let mut constant = radius * radius;
        for i in 0..ambient_dim {
            let c = center.coord(i);
            constant -= c * c;
            let mut sq = vec![0; ambient_dim];
            sq[i] = 2;
            p.add_term(sq, -Rational::one());
            let mut lin = vec![0; ambient_dim];
            lin[i] = 1;
            p.add_term(lin, Rational::from_integer(2.into()) * c);
        }
        p.add_term(vec![0; ambient_dim], constant);
        Ok(match orientation {
            SphereOrientation::InsidePositive => p,
            SphereOrientation::OutsidePositive => p.neg(),
        })
    }

    /// Re-index variables along an injective coordinate map, producing a
    /// polynomial in `new_num_vars` variables. The zero set of the result is
    /// the preimage cylinder of the original zero set under the projection
    /// selecting the mapped coordinates.
    pub fn substitute_coords(
        &self,
        map: &BTreeMap<usize, usize>,
        new_num_vars: usize,
    ) -> Result<Polynomial, PolyError> {
        let mut seen = vec![false; new_num_vars];
        for &to in map.values() {
            if to >= new_num_vars {
                return Err(PolyError::TargetOutOfRange {
                    target: to,
                    new_dim: new_num_vars,
                });
            }
            if seen[to] {
                return Err(PolyError::NonInjectiveMap { target: to });
            }
            seen[to] = true;
        }
        let mut out = Polynomial::zero(new_num_vars);
        for (exps, coeff) in &self.terms {
            let mut new_exps = vec![0u32; new_num_vars];
            for (var, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map.get(&var) {
                    Some(&to) => new_exps[to] = e,
                    None => return Err(PolyError::UnmappedVariable { var }),
                }
            }
            out.add_term(new_exps, coeff.clone());
        }
        Ok(out)
    }

    /// Flat floating-point view for tight grid loops.
    pub fn compiled(&self) -> CompiledPoly {
        CompiledPoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(exps, coeff)| {
                    let factors: Vec<(usize, u32)> = exps
                        .iter()
                        .enumerate()
                        .filter(|&(_, &e)| e > 0)
                        .map(|(i, &e)| (i, e))
                        .collect();
                    (coeff.to_f64().unwrap(), factors)
                })
                .collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", rational_str(coeff))?;
            for (i, &e) in exps.iter().enumerate() {
                if e == 1 {
                    write!(f, "*x{}", i + 1)?;
                } else if e > 1 {
                    write!(f, "*x{}^{}", i + 1, e)?;
                }
            }
        }
        Ok(())
    }
}

/// Precompiled floating-point form of a polynomial.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    num_vars: usize,
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (coeff, factors) in &self.terms {
            let mut term = *coeff;
            for &(i, e) in factors {
                let mut p = x[i];
                for _ in 1..e {
                    p *= x[i];
                }
                term *= p;
            }
            acc += term;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[i64]) -> RationalPoint {
        RationalPoint::from_integers(coords)
    }

    /// x1^2 + x2^2 in two variables.
    fn sum_of_squares() -> Polynomial {
        Polynomial::from_terms(
            2,
            vec![
                (vec![2, 0], Rational::one()),
                (vec![0, 2], Rational::one()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn eval_sum_of_squares() {
        let p = sum_of_squares();
        assert_eq!(p.eval(&pt(&[3, 4])).unwrap(), rat(25));
    }

    #[test]
    fn eval_zero_polynomial() {
        let p = Polynomial::zero(2);
        assert_eq!(p.eval(&pt(&[7, -2])).unwrap(), rat(0));
    }

    #[test]
    fn eval_on_outer_circle_fixture() {
        // 100 - (x1 - 1)^2 - x2^2 vanishes at (1, 10).
        let p = Polynomial::sphere(
            &pt(&[1, 0]),
            &rat(10),
            2,
            SphereOrientation::InsidePositive,
        )
        .unwrap();
        assert_eq!(p.eval(&pt(&[1, 10])).unwrap(), rat(0));
    }

    #[test]
    fn eval_dimension_mismatch() {
        let p = sum_of_squares();
        assert!(matches!(
            p.eval(&pt(&[1, 2, 3])),
            Err(PolyError::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn gradient_of_sphere_at_pole() {
        // 1 - x1^2 - x2^2 - y1^2 - y2^2 at (0,0,1,0) -> (0,0,-2,0)
        let p = Polynomial::sphere(
            &pt(&[0, 0, 0, 0]),
            &rat(1),
            4,
            SphereOrientation::InsidePositive,
        )
        .unwrap();
        let g = p.gradient(&pt(&[0, 0, 1, 0])).unwrap();
        assert_eq!(g, vec![rat(0), rat(0), rat(-2), rat(0)]);
    }

    #[test]
    fn gradient_of_linear() {
        let p = Polynomial::variable(3, 0);
        let g = p.gradient(&pt(&[5, -2, 9])).unwrap();
        assert_eq!(g, vec![rat(1), rat(0), rat(0)]);
    }

    #[test]
    fn gradient_of_unit_circle() {
        // x1^2 + x2^2 - 1 at (1,0) -> (2,0)
        let p = Polynomial::sphere(&pt(&[0, 0]), &rat(1), 2, SphereOrientation::OutsidePositive)
            .unwrap();
        let g = p.gradient(&pt(&[1, 0])).unwrap();
        assert_eq!(g, vec![rat(2), rat(0)]);
    }

    #[test]
    fn sphere_inside_positive_unit() {
        let p = Polynomial::sphere(&pt(&[0, 0]), &rat(1), 2, SphereOrientation::InsidePositive)
            .unwrap();
        let expected = Polynomial::from_terms(
            2,
            vec![
                (vec![0, 0], rat(1)),
                (vec![2, 0], rat(-1)),
                (vec![0, 2], rat(-1)),
            ],
        )
        .unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn sphere_leftmost_point_is_zero() {
        let p = Polynomial::sphere(&pt(&[1, 0]), &rat(10), 2, SphereOrientation::InsidePositive)
            .unwrap();
        assert_eq!(p.eval(&pt(&[-9, 0])).unwrap(), rat(0));
    }

    #[test]
    fn sphere_outside_positive_center_negative() {
        let p = Polynomial::sphere(&pt(&[2, 0]), &rat(1), 2, SphereOrientation::OutsidePositive)
            .unwrap();
        assert_eq!(p.eval(&pt(&[2, 0])).unwrap(), rat(-1));
    }

    #[test]
    fn sphere_rejects_nonpositive_radius() {
        assert!(matches!(
            Polynomial::sphere(&pt(&[0, 0]), &rat(0), 2, SphereOrientation::InsidePositive),
            Err(PolyError::NonPositiveRadius)
        ));
    }

    #[test]
    fn substitute_lifts_circle_into_three_vars() {
        let p = Polynomial::sphere(&pt(&[0, 0]), &rat(1), 2, SphereOrientation::OutsidePositive)
            .unwrap();
        let map: BTreeMap<usize, usize> = [(0, 0), (1, 2)].into_iter().collect();
        let lifted = p.substitute_coords(&map, 3).unwrap();
        let expected = Polynomial::from_terms(
            3,
            vec![
                (vec![0, 0, 0], rat(-1)),
                (vec![2, 0, 0], rat(1)),
                (vec![0, 0, 2], rat(1)),
            ],
        )
        .unwrap();
        assert_eq!(lifted, expected);
    }

    #[test]
    fn substitute_identity_is_noop() {
        let p = sum_of_squares();
        let map: BTreeMap<usize, usize> = [(0, 0), (1, 1)].into_iter().collect();
        assert_eq!(p.substitute_coords(&map, 2).unwrap(), p);
    }

    #[test]
    fn substitute_widens_line_polynomial() {
        // x1 - t1 with t1 = 3, mapped into two variables.
        let p = Polynomial::variable(1, 0).sub(&Polynomial::constant(1, rat(3)));
        let map: BTreeMap<usize, usize> = [(0, 0)].into_iter().collect();
        let widened = p.substitute_coords(&map, 2).unwrap();
        let expected =
            Polynomial::from_terms(2, vec![(vec![1, 0], rat(1)), (vec![0, 0], rat(-3))]).unwrap();
        assert_eq!(widened, expected);
    }

    #[test]
    fn substitute_rejects_unmapped_variable() {
        let p = sum_of_squares();
        let map: BTreeMap<usize, usize> = [(0, 0)].into_iter().collect();
        assert!(matches!(
            p.substitute_coords(&map, 2),
            Err(PolyError::UnmappedVariable { var: 1 })
        ));
    }

    #[test]
    fn substitute_then_eval_matches_projection() {
        let p = sum_of_squares();
        let map: BTreeMap<usize, usize> = [(0, 1), (1, 3)].into_iter().collect();
        let lifted = p.substitute_coords(&map, 4).unwrap();
        let full = pt(&[9, 3, -7, 4]);
        let projected = pt(&[3, 4]);
        assert_eq!(lifted.eval(&full).unwrap(), p.eval(&projected).unwrap());
    }

    #[test]
    fn compiled_matches_exact_eval() {
        let p = Polynomial::sphere(
            &pt(&[1, 0]),
            &rat(10),
            2,
            SphereOrientation::InsidePositive,
        )
        .unwrap();
        let c = p.compiled();
        for x in [[0.0, 0.0], [3.5, -2.25], [-9.0, 0.0]] {
            let exact = p.eval_f64(&x);
            assert!((c.eval(&x) - exact).abs() < 1e-12);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_rational() -> impl Strategy<Value = Rational> {
            (-20i64..=20, 1i64..=8).prop_map(|(n, d)| ratio(n, d))
        }

        fn arb_poly(num_vars: usize) -> impl Strategy<Value = Polynomial> {
            proptest::collection::vec(
                (
                    proptest::collection::vec(0u32..=4, num_vars),
                    arb_rational(),
                ),
                0..6,
            )
            .prop_map(move |terms| Polynomial::from_terms(num_vars, terms).unwrap())
        }

        proptest! {
            // Each partial derivative agrees with a central finite difference
            // of the floating-point view.
            #[test]
            fn gradient_matches_finite_difference(
                p in arb_poly(3),
                x in proptest::collection::vec(-3.0f64..3.0, 3),
            ) {
                let h = 1e-6;
                let g = p.gradient_f64(&x);
                for v in 0..3 {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[v] += h;
                    xm[v] -= h;
                    let fd = (p.eval_f64(&xp) - p.eval_f64(&xm)) / (2.0 * h);
                    let scale = 1.0 + g[v].abs().max(fd.abs());
                    prop_assert!((g[v] - fd).abs() / scale < 1e-4);
                }
            }

            // Monomial derivative identity, checked symbolically.
            #[test]
            fn monomial_derivative_is_exact(e in 1u32..=6, v in 0usize..3) {
                let mut exps = vec![0u32; 3];
                exps[v] = e;
                let p = Polynomial::from_terms(3, vec![(exps.clone(), rat(1))]).unwrap();
                let d = p.partial_derivative(v);
                let mut dexps = exps.clone();
                dexps[v] = e - 1;
                let expected = Polynomial::from_terms(
                    3,
                    vec![(dexps, Rational::from_integer(e.into()))],
                )
                .unwrap();
                prop_assert_eq!(d, expected);
            }

            // Lifting along a coordinate map commutes with evaluation.
            #[test]
            fn substitute_eval_commutes(
                p in arb_poly(2),
                a in -9i64..9, b in -9i64..9, c in -9i64..9,
            ) {
                let map: BTreeMap<usize, usize> = [(0usize, 0usize), (1, 2)].into_iter().collect();
                let lifted = p.substitute_coords(&map, 3).unwrap();
                let full = RationalPoint::from_integers(&[a, b, c]);
                let projected = RationalPoint::from_integers(&[a, c]);
                prop_assert_eq!(lifted.eval(&full).unwrap(), p.eval(&projected).unwrap());
            }

            // Sphere orientation sign law on sampled rational points.
            #[test]
            fn sphere_orientation_signs(x in -6i64..6, y in -6i64..6) {
                let inside = Polynomial::sphere(
                    &RationalPoint::from_integers(&[0, 0]),
                    &rat(4),
                    2,
                    SphereOrientation::InsidePositive,
                ).unwrap();
                let outside = Polynomial::sphere(
                    &RationalPoint::from_integers(&[0, 0]),
                    &rat(4),
                    2,
                    SphereOrientation::OutsidePositive,
                ).unwrap();
                let p = RationalPoint::from_integers(&[x, y]);
                let vin = inside.eval(&p).unwrap();
                let vout = outside.eval(&p).unwrap();
                prop_assert_eq!(vin.clone(), -vout.clone());
                let d2 = x * x + y * y;
                if d2 < 16 {
                    prop_assert!(vin.is_positive());
                } else if d2 > 16 {
                    prop_assert!(vin.is_negative());
                } else {
                    prop_assert!(vin.is_zero());
                }
            }
        }
    }
}
