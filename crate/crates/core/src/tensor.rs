//! Tensor-square and tensor-cube machinery: the signed twist and cyclic
//! permutations, the adjoint diagonal action, coboundaries of candidate
//! r-matrices, the cocycle identity, and the classical Yang–Baxter sum.

use crate::algebra::{bracket_basis, AlgebraInstance, BasisVector, Element, Homogeneity, Parity};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TensorError {
    #[error("operand must be parity-homogeneous")]
    MixedParity,
}

/// Sparse element of `g ⊗ g`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tensor2 {
    terms: BTreeMap<(BasisVector, BasisVector), Scalar>,
}

/// Sparse element of `g ⊗ g ⊗ g`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tensor3 {
    terms: BTreeMap<(BasisVector, BasisVector, BasisVector), Scalar>,
}

impl Tensor2 {
    pub fn zero() -> Self {
        Tensor2::default()
    }

    pub fn term(a: BasisVector, b: BasisVector, coeff: Scalar) -> Self {
        let mut t = Tensor2::zero();
        t.add_term(a, b, coeff);
        t
    }

    pub fn of(a: BasisVector, b: BasisVector) -> Self {
        Tensor2::term(a, b, Scalar::one())
    }

    /// `x ⊗ y` for arbitrary elements.
    pub fn product(x: &Element, y: &Element) -> Self {
        let mut t = Tensor2::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                t.add_term(*a, *b, ca * cb);
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(BasisVector, BasisVector), &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, a: BasisVector, b: BasisVector, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((a, b)) {
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

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in rhs.terms() {
            out.add_term(*a, *b, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in rhs.terms() {
            out.add_term(*a, *b, -c);
        }
        out
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        if factor.is_zero() {
            return Tensor2::zero();
        }
        Tensor2 {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c * factor))
                .collect(),
        }
    }

    /// Parity of the tensor: the sum of component parities, which must be
    /// shared by every term.
    pub fn parity_class(&self) -> Homogeneity<Parity> {
        let mut h = Homogeneity::Zero;
        for (a, b) in self.terms.keys() {
            let p = a.parity().add(b.parity());
            h = match h {
                Homogeneity::Zero => Homogeneity::Homogeneous(p),
                Homogeneity::Homogeneous(q) if q == p => Homogeneity::Homogeneous(q),
                _ => return Homogeneity::Mixed,
            };
        }
        h
    }

    pub fn render(&self, inst: &AlgebraInstance) -> String {
        render_terms(
            self.terms
                .iter()
                .map(|((a, b), c)| (format!("{}⊗{}", a.render(inst), b.render(inst)), c)),
        )
    }
}

impl Tensor3 {
    pub fn zero() -> Self {
        Tensor3::default()
    }

    pub fn of(a: BasisVector, b: BasisVector, c: BasisVector) -> Self {
        let mut t = Tensor3::zero();
        t.add_term(a, b, c, Scalar::one());
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(
        &self,
    ) -> impl Iterator<Item = (&(BasisVector, BasisVector, BasisVector), &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, a: BasisVector, b: BasisVector, c: BasisVector, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((a, b, c)) {
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

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b, c), v) in rhs.terms() {
            out.add_term(*a, *b, *c, v.clone());
        }
        out
    }

    /// Tensor product with an element in the given slot (0, 1 or 2).
    pub fn from_slot(t: &Tensor2, slot: usize, e: &Element) -> Self {
        let mut out = Tensor3::zero();
        for ((a, b), c) in t.terms() {
            for (x, cx) in e.terms() {
                let coeff = c * cx;
                match slot {
                    0 => out.add_term(*x, *a, *b, coeff),
                    1 => out.add_term(*a, *x, *b, coeff),
                    2 => out.add_term(*a, *b, *x, coeff),
                    _ => panic!("tensor slot out of range"),
                }
            }
        }
        out
    }

    pub fn render(&self, inst: &AlgebraInstance) -> String {
        render_terms(self.terms.iter().map(|((a, b, c), v)| {
            (
                format!(
                    "{}⊗{}⊗{}",
                    a.render(inst),
                    b.render(inst),
                    c.render(inst)
                ),
                v,
            )
        }))
    }
}

fn render_terms<'a>(terms: impl Iterator<Item = (String, &'a Scalar)>) -> String {
    let mut out = String::new();
    for (k, (body, coeff)) in terms.enumerate() {
        let (neg, piece) = match coeff.simple_factor() {
            Some((neg, mag)) if mag == "1" => (neg, body),
            Some((neg, mag)) => (neg, format!("{mag}*{body}")),
            None => (false, format!("({coeff})*{body}")),
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&piece);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn odd(p: Parity) -> bool {
    p == Parity::Odd
}

/// Super-twist `x⊗y ↦ (−1)^{[x][y]} y⊗x`.
pub fn super_twist(t: &Tensor2) -> Tensor2 {
    let mut out = Tensor2::zero();
    for ((a, b), c) in t.terms() {
        let coeff = if odd(a.parity()) && odd(b.parity()) {
            -c
        } else {
            c.clone()
        };
        out.add_term(*b, *a, coeff);
    }
    out
}

/// Super-cyclic permutation
/// `x₁⊗x₂⊗x₃ ↦ (−1)^{[x₁]([x₂]+[x₃])} x₂⊗x₃⊗x₁`.
pub fn super_cycle(t: &Tensor3) -> Tensor3 {
    let mut out = Tensor3::zero();
    for ((a, b, c), v) in t.terms() {
        let flip = odd(a.parity()) && odd(b.parity().add(c.parity()));
        let coeff = if flip { -v } else { v.clone() };
        out.add_term(*b, *c, *a, coeff);
    }
    out
}

/// Adjoint diagonal action
/// `x ∗ Σ aᵢ⊗bᵢ = Σ [x,aᵢ]⊗bᵢ + (−1)^{[x][aᵢ]} aᵢ⊗[x,bᵢ]`.
pub fn diag_action(
    inst: &AlgebraInstance,
    x: &Element,
    t: &Tensor2,
) -> Result<Tensor2, TensorError> {
    let x_parity = match x.parity_class() {
        Homogeneity::Homogeneous(p) => p,
        Homogeneity::Zero => return Ok(Tensor2::zero()),
        Homogeneity::Mixed => return Err(TensorError::MixedParity),
    };
    let mut out = Tensor2::zero();
    for ((a, b), c) in t.terms() {
        for (xb, xc) in x.terms() {
            let factor = xc * c;
            for (z, cz) in bracket_basis(inst, xb, a).terms() {
                out.add_term(*z, *b, cz * &factor);
            }
            let signed = if odd(x_parity) && odd(a.parity()) {
                -&factor
            } else {
                factor.clone()
            };
            for (z, cz) in bracket_basis(inst, xb, b).terms() {
                out.add_term(*a, *z, cz * &signed);
            }
        }
    }
    Ok(out)
}

/// Coboundary `Δ_r(x) = (−1)^{[r][x]} x ∗ r`; `r` must be parity-homogeneous.
pub fn coboundary(
    inst: &AlgebraInstance,
    r: &Tensor2,
    x: &Element,
) -> Result<Tensor2, TensorError> {
    let r_parity = match r.parity_class() {
        Homogeneity::Homogeneous(p) => p,
        Homogeneity::Zero => return Ok(Tensor2::zero()),
        Homogeneity::Mixed => return Err(TensorError::MixedParity),
    };
    let x_parity = match x.parity_class() {
        Homogeneity::Homogeneous(p) => p,
        Homogeneity::Zero => return Ok(Tensor2::zero()),
        Homogeneity::Mixed => return Err(TensorError::MixedParity),
    };
    let action = diag_action(inst, x, r)?;
    Ok(if odd(r_parity) && odd(x_parity) {
        action.scale(&Scalar::from_int(-1))
    } else {
        action
    })
}

/// Cocycle defect of `Δ_r` on a pair:
/// `Δ_r([x,y]) − (−1)^{[r][x]} x∗Δ_r(y) + (−1)^{[x][y]+[r][y]} y∗Δ_r(x)`.
///
/// For even `r` the two parity factors disappear and this is the plain
/// co-Leibniz defect `Δ_r([x,y]) − x∗Δ_r(y) + (−1)^{[x][y]} y∗Δ_r(x)`; the
/// extra signs extend the identity "1-coboundaries are 1-cocycles" to odd
/// cochains, where the differential itself carries the parity of `r`.
pub fn cocycle_residual(
    inst: &AlgebraInstance,
    r: &Tensor2,
    x: &Element,
    y: &Element,
) -> Result<Tensor2, TensorError> {
    let (xp, yp) = match (x.parity_class(), y.parity_class()) {
        (Homogeneity::Mixed, _) | (_, Homogeneity::Mixed) => {
            return Err(TensorError::MixedParity)
        }
        (xc, yc) => (
            *xc.value().unwrap_or(&Parity::Even),
            *yc.value().unwrap_or(&Parity::Even),
        ),
    };
    let rp = match r.parity_class() {
        Homogeneity::Homogeneous(p) => p,
        Homogeneity::Zero => return Ok(Tensor2::zero()),
        Homogeneity::Mixed => return Err(TensorError::MixedParity),
    };
    let bracket_xy = crate::algebra::bracket(inst, x, y);
    let lead = coboundary(inst, r, &bracket_xy)?;
    let x_on_dy = diag_action(inst, x, &coboundary(inst, r, y)?)?;
    let y_on_dx = diag_action(inst, y, &coboundary(inst, r, x)?)?;
    let x_term = if odd(rp) && odd(xp) {
        x_on_dy.scale(&Scalar::from_int(-1))
    } else {
        x_on_dy
    };
    let y_sign_odd = (odd(xp) && odd(yp)) ^ (odd(rp) && odd(yp));
    let y_term = if y_sign_odd {
        y_on_dx.scale(&Scalar::from_int(-1))
    } else {
        y_on_dx
    };
    Ok(lead.sub(&x_term).add(&y_term))
}

/// The classical Yang–Baxter sum
/// `c(r) = [r¹²,r¹³] + [r¹²,r²³] + [r¹³,r²³]` expanded over the terms of `r`.
pub fn cybe(inst: &AlgebraInstance, r: &Tensor2) -> Tensor3 {
    let mut out = Tensor3::zero();
    for ((ai, bi), ci) in r.terms() {
        for ((aj, bj), cj) in r.terms() {
            let factor = ci * cj;
            let signed = if odd(aj.parity()) && odd(bi.parity()) {
                -&factor
            } else {
                factor.clone()
            };
            // [r¹²,r¹³] = Σ (−1)^{[a_j][b_i]} [a_i,a_j] ⊗ b_i ⊗ b_j
            for (z, cz) in bracket_basis(inst, ai, aj).terms() {
                out.add_term(*z, *bi, *bj, cz * &signed);
            }
            // [r¹²,r²³] = Σ a_i ⊗ [b_i,a_j] ⊗ b_j
            for (z, cz) in bracket_basis(inst, bi, aj).terms() {
                out.add_term(*ai, *z, *bj, cz * &factor);
            }
            // [r¹³,r²³] = Σ (−1)^{[a_j][b_i]} a_i ⊗ a_j ⊗ [b_i,b_j]
            for (z, cz) in bracket_basis(inst, bi, bj).terms() {
                out.add_term(*ai, *aj, *z, cz * &signed);
            }
        }
    }
    out
}

/// Skewness defect `r + τ(r)`; empty exactly when `r` is skew.
pub fn skew_residual(r: &Tensor2) -> Tensor2 {
    r.add(&super_twist(r))
}

pub fn skew_check(r: &Tensor2) -> bool {
    skew_residual(r).is_zero()
}
