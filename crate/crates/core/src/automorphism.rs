//! Automorphism tables: construction from classification data, application,
//! composition, homomorphism certification, and recovery of the classifying
//! data from a table.

use crate::algebra::{
    bracket_basis, AlgebraInstance, BasisVector, Element, GammaVector, Kind, Sector,
};
use crate::derivation::Window;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AutoError {
    #[error("scaling parameter must be nonzero")]
    ZeroBeta,
    #[error("diagonal scaling needs a rank-1 index lattice")]
    NotRankOne,
    #[error("image escapes the table domain at {vector}")]
    OutOfWindow { vector: String },
    #[error("classification needs {vector} in the table domain")]
    MissingVector { vector: String },
    #[error("not an automorphism of the classified form: {detail}")]
    NotClassifiable { detail: String },
    #[error("constraint {identity} fails at {witness}")]
    ConstraintViolation { identity: String, witness: String },
}

/// Images of window basis vectors under one automorphism, the image of the
/// central element included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutoTable {
    images: BTreeMap<BasisVector, Element>,
}

impl AutoTable {
    pub fn from_images(images: BTreeMap<BasisVector, Element>) -> Self {
        AutoTable { images }
    }

    pub fn image(&self, bv: &BasisVector) -> Option<&Element> {
        self.images.get(bv)
    }

    pub fn images(&self) -> impl Iterator<Item = (&BasisVector, &Element)> {
        self.images.iter()
    }

    pub fn with_image(mut self, src: BasisVector, image: Element) -> Self {
        self.images.insert(src, image);
        self
    }

    pub fn apply(&self, x: &Element, inst: &AlgebraInstance) -> Result<Element, AutoError> {
        let mut out = Element::zero();
        for (bv, c) in x.terms() {
            let image = self.images.get(bv).ok_or_else(|| AutoError::OutOfWindow {
                vector: bv.render(inst),
            })?;
            out = out.add(&image.scale(c));
        }
        Ok(out)
    }
}

/// `a ∘ b`: the domain is `b`'s, and every image of `b` must stay inside
/// `a`'s domain.
pub fn compose(
    inst: &AlgebraInstance,
    a: &AutoTable,
    b: &AutoTable,
) -> Result<AutoTable, AutoError> {
    let mut images = BTreeMap::new();
    for (src, im) in b.images() {
        images.insert(*src, a.apply(im, inst)?);
    }
    Ok(AutoTable::from_images(images))
}

fn diagonal_table(
    inst: &AlgebraInstance,
    window: Window,
    mut image_of: impl FnMut(&BasisVector) -> Element,
) -> AutoTable {
    let images = window
        .basis(inst)
        .into_iter()
        .map(|bv| (bv, image_of(&bv)))
        .collect();
    AutoTable::from_images(images)
}

pub fn identity_auto(inst: &AlgebraInstance, window: Window) -> AutoTable {
    diagonal_table(inst, window, |bv| Element::basis(*bv))
}

/// Doubled index of a rank-1 basis vector; the exponent of the diagonal
/// scaling action.
fn doubled_index(bv: &BasisVector) -> i64 {
    2 * bv.index.coords[0]
        + match bv.index.sector {
            Sector::Base => 0,
            Sector::Shifted => 1,
        }
}

/// The diagonal scaling automorphism: `C ↦ C` and `X_p ↦ β^{2p}·X_p` for the
/// three graded families. Only integer powers of `β` ever arise.
pub fn inner_auto(
    inst: &AlgebraInstance,
    window: Window,
    beta: &Scalar,
) -> Result<AutoTable, AutoError> {
    if beta.is_zero() {
        return Err(AutoError::ZeroBeta);
    }
    if inst.rank != 1 {
        return Err(AutoError::NotRankOne);
    }
    Ok(diagonal_table(inst, window, |bv| {
        if bv.kind == Kind::C {
            Element::basis(*bv)
        } else {
            Element::term(*bv, beta.pow(doubled_index(bv)))
        }
    }))
}

/// The order-4 outer generator: indices reverse, `C ↦ −C`, `L_p ↦ −L_{−p}`,
/// `T_p ↦ T_{−p}`, `G_p ↦ i·G_{−p}`.
pub fn reversal_auto(inst: &AlgebraInstance, window: Window) -> AutoTable {
    diagonal_table(inst, window, |bv| match bv.kind {
        Kind::C => Element::term(*bv, Scalar::from_int(-1)),
        Kind::L => Element::term(
            BasisVector::l(bv.index.neg(inst)),
            Scalar::from_int(-1),
        ),
        Kind::T => Element::basis(BasisVector::t(bv.index.neg(inst))),
        Kind::G => Element::term(BasisVector::g(bv.index.neg(inst)), Scalar::i()),
    })
}

/// The square of the reversal: fixes `L`, `T`, `C` and negates every `G`.
pub fn odd_sign_auto(inst: &AlgebraInstance, window: Window) -> AutoTable {
    diagonal_table(inst, window, |bv| {
        if bv.kind == Kind::G {
            Element::term(*bv, Scalar::from_int(-1))
        } else {
            Element::basis(*bv)
        }
    })
}

pub fn reversal_power(inst: &AlgebraInstance, window: Window, k: u8) -> AutoTable {
    match k % 4 {
        0 => identity_auto(inst, window),
        1 => reversal_auto(inst, window),
        2 => odd_sign_auto(inst, window),
        _ => {
            let base = reversal_auto(inst, window);
            let sq = odd_sign_auto(inst, window);
            compose(inst, &sq, &base).expect("reversal preserves its own window")
        }
    }
}

/// Homomorphism defects `σ([x,y]) − [σ(x), σ(y)]`, one per window pair in
/// pair order; an evaluation that escapes the table domain is an error.
pub fn homomorphism_residuals(
    inst: &AlgebraInstance,
    table: &AutoTable,
    window: Window,
) -> Result<Vec<Element>, AutoError> {
    let mut out = Vec::new();
    for (x, y) in window.pairs(inst) {
        let bxy = bracket_basis(inst, &x, &y);
        let lhs = table.apply(&bxy, inst)?;
        let sx = table.apply(&Element::basis(x), inst)?;
        let sy = table.apply(&Element::basis(y), inst)?;
        out.push(lhs.sub(&crate::algebra::bracket(inst, &sx, &sy)));
    }
    Ok(out)
}

/// Classifying data of a twisted-instance automorphism: a power of the
/// reversal composed with a diagonal scaling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutoSpec {
    pub k: u8,
    pub beta: Scalar,
}

impl AutoSpec {
    pub fn new(k: u8, beta: Scalar) -> Result<Self, AutoError> {
        if beta.is_zero() {
            return Err(AutoError::ZeroBeta);
        }
        Ok(AutoSpec { k: k % 4, beta })
    }

    /// The image of one basis vector under `reversalᵏ ∘ inner(β)`.
    fn image(&self, inst: &AlgebraInstance, bv: &BasisVector) -> Element {
        if bv.kind == Kind::C {
            let sign = if self.k % 2 == 1 { -1 } else { 1 };
            return Element::term(*bv, Scalar::from_int(sign));
        }
        let scale = self.beta.pow(doubled_index(bv));
        let reverse = self.k % 2 == 1;
        let target = if reverse {
            bv.index.neg(inst)
        } else {
            bv.index
        };
        let (kind_factor, target_bv) = match bv.kind {
            Kind::L => (
                if reverse {
                    Scalar::from_int(-1)
                } else {
                    Scalar::one()
                },
                BasisVector::l(target),
            ),
            Kind::T => (Scalar::one(), BasisVector::t(target)),
            Kind::G => (
                match self.k {
                    0 => Scalar::one(),
                    1 => Scalar::i(),
                    2 => Scalar::from_int(-1),
                    _ => -Scalar::i(),
                },
                BasisVector::g(target),
            ),
            Kind::C => unreachable!(),
        };
        Element::term(target_bv, &scale * &kind_factor)
    }

    pub fn table(&self, inst: &AlgebraInstance, window: Window) -> AutoTable {
        diagonal_table(inst, window, |bv| self.image(inst, bv))
    }

    fn table_for_keys<'a>(
        &self,
        inst: &AlgebraInstance,
        keys: impl Iterator<Item = &'a BasisVector>,
    ) -> AutoTable {
        AutoTable::from_images(keys.map(|bv| (*bv, self.image(inst, bv))).collect())
    }
}

/// Recovers the unique `(k, β)` whose generated table matches `a` on its
/// domain.
pub fn classify(inst: &AlgebraInstance, a: &AutoTable) -> Result<AutoSpec, AutoError> {
    let l0 = BasisVector::l(GammaVector::zero());
    let g0 = BasisVector::g(GammaVector::zero());
    let t_half = BasisVector::t(GammaVector::half_steps(1));
    let t_neg_half = BasisVector::t(GammaVector::half_steps(-1));
    let required = [
        l0,
        BasisVector::l(GammaVector::half_steps(2)),
        BasisVector::l(GammaVector::half_steps(-2)),
        t_half,
        t_neg_half,
        g0,
        BasisVector::g(GammaVector::half_steps(1)),
        BasisVector::g(GammaVector::half_steps(-1)),
    ];
    for bv in required {
        if a.image(&bv).is_none() {
            return Err(AutoError::MissingVector {
                vector: bv.render(inst),
            });
        }
    }

    let a0 = a.image(&l0).unwrap().coeff(&l0);
    let (reversed, beta) = if a0 == Scalar::one() {
        (false, a.image(&t_half).unwrap().coeff(&t_half))
    } else if a0 == Scalar::from_int(-1) {
        (true, a.image(&t_half).unwrap().coeff(&t_neg_half))
    } else {
        return Err(AutoError::NotClassifiable {
            detail: format!("coefficient of L(0) is {a0}, expected ±1"),
        });
    };
    if beta.is_zero() {
        return Err(AutoError::NotClassifiable {
            detail: "vanishing T(1/2) coefficient".to_string(),
        });
    }

    let n0 = a.image(&g0).unwrap().coeff(&g0);
    let k = if !reversed {
        if n0 == Scalar::one() {
            0
        } else if n0 == Scalar::from_int(-1) {
            2
        } else {
            return Err(AutoError::NotClassifiable {
                detail: format!("coefficient of G(0) is {n0}, expected ±1"),
            });
        }
    } else if n0 == Scalar::i() {
        1
    } else if n0 == -Scalar::i() {
        3
    } else {
        return Err(AutoError::NotClassifiable {
            detail: format!("coefficient of G(0) is {n0}, expected ±i"),
        });
    };

    let spec = AutoSpec::new(k, beta)?;
    let rebuilt = spec.table_for_keys(inst, a.images().map(|(bv, _)| bv));
    if &rebuilt != a {
        return Err(AutoError::NotClassifiable {
            detail: "table differs from the generated form".to_string(),
        });
    }
    Ok(spec)
}

/// Classifying data of a generalized-instance automorphism: the sign `ε`,
/// multiplicative data on the `Γ`-generators, the value at the base point of
/// `Γ_s`, and a square root of `ε` fixing the action on the odd part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedAutoSpec {
    pub epsilon: i64,
    pub a_gen: Vec<Scalar>,
    pub e_s: Scalar,
    pub root: Scalar,
}

impl GeneralizedAutoSpec {
    pub fn new(
        epsilon: i64,
        a_gen: Vec<Scalar>,
        e_s: Scalar,
        root: Scalar,
    ) -> Result<Self, AutoError> {
        if epsilon != 1 && epsilon != -1 {
            return Err(AutoError::ConstraintViolation {
                identity: "ε² = 1".to_string(),
                witness: format!("ε = {epsilon}"),
            });
        }
        if a_gen.iter().any(Scalar::is_zero) || e_s.is_zero() {
            return Err(AutoError::ConstraintViolation {
                identity: "multiplicative data must be nonzero".to_string(),
                witness: "generator value".to_string(),
            });
        }
        let spec = GeneralizedAutoSpec {
            epsilon,
            a_gen,
            e_s,
            root,
        };
        let eps = spec.epsilon_scalar();
        if &(&spec.root * &spec.root) - &eps != Scalar::zero() {
            return Err(AutoError::ConstraintViolation {
                identity: "root² = ε".to_string(),
                witness: format!("root = {}", spec.root),
            });
        }
        Ok(spec)
    }

    fn epsilon_scalar(&self) -> Scalar {
        Scalar::from_int(self.epsilon)
    }

    /// The multiplicative extension `F(γ) = Π (ε·a_gen[j])^{c_j}`; the
    /// recursion `a_{γ+α} = ε·a_γ·a_α` then gives `a_γ = ε·F(γ)`.
    fn hom_value(&self, coords: [i64; 2]) -> Scalar {
        let eps = self.epsilon_scalar();
        let mut v = Scalar::one();
        for (c, a) in coords.iter().zip(&self.a_gen) {
            if *c != 0 {
                v = &v * &(&eps * a).pow(*c);
            }
        }
        v
    }

    /// `a_γ` for a `Γ`-point.
    pub fn a_value(&self, coords: [i64; 2]) -> Scalar {
        &self.epsilon_scalar() * &self.hom_value(coords)
    }

    /// `e_μ` for `μ = s + γ`.
    pub fn e_value(&self, offset: [i64; 2]) -> Scalar {
        &self.e_s * &self.hom_value(offset)
    }
}

/// Builds the table of the generalized automorphism after re-checking the
/// quadratic constraint `e_μ² = ε·a_{2μ}` on every window point of `Γ_s`.
pub fn generalized_auto(
    inst: &AlgebraInstance,
    spec: &GeneralizedAutoSpec,
    window: Window,
) -> Result<AutoTable, AutoError> {
    let eps = spec.epsilon_scalar();
    for bv in window.basis(inst) {
        if bv.kind != Kind::T {
            continue;
        }
        let mu = bv.index;
        let e_mu = spec.e_value(mu.coords);
        let double = mu.double(inst);
        let rhs = &eps * &spec.a_value(double.coords);
        if &(&e_mu * &e_mu) - &rhs != Scalar::zero() {
            return Err(AutoError::ConstraintViolation {
                identity: "e_μ² = ε·a_{2μ}".to_string(),
                witness: format!("μ = {}", mu.render(inst)),
            });
        }
        for (j, _) in spec.a_gen.iter().enumerate() {
            let mut shifted = mu.coords;
            shifted[j] += 1;
            let mut gen_coords = [0i64; 2];
            gen_coords[j] = 1;
            let lhs = spec.e_value(shifted);
            let rhs = &(&eps * &e_mu) * &spec.a_value(gen_coords);
            if &lhs - &rhs != Scalar::zero() {
                return Err(AutoError::ConstraintViolation {
                    identity: "e_{μ+γ} = ε·e_μ·a_γ".to_string(),
                    witness: format!("μ = {}", mu.render(inst)),
                });
            }
        }
    }

    let reverse = spec.epsilon == -1;
    let omega = |sector: Sector| -> Scalar {
        if !reverse {
            spec.root.clone()
        } else if sector == Sector::Base {
            -&spec.root
        } else {
            spec.root.clone()
        }
    };
    Ok(diagonal_table(inst, window, |bv| {
        let target_index = if reverse {
            bv.index.neg(inst)
        } else {
            bv.index
        };
        match bv.kind {
            Kind::C => Element::term(*bv, eps.clone()),
            Kind::L => Element::term(
                BasisVector::l(target_index),
                spec.a_value(bv.index.coords),
            ),
            Kind::T => Element::term(
                BasisVector::t(target_index),
                spec.e_value(bv.index.coords),
            ),
            Kind::G => {
                let data = match bv.index.sector {
                    Sector::Base => spec.a_value(bv.index.coords),
                    Sector::Shifted => spec.e_value(bv.index.coords),
                };
                Element::term(
                    BasisVector::g(target_index),
                    &omega(bv.index.sector) * &data,
                )
            }
        }
    }))
}
