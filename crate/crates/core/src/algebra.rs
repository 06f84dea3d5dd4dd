//! Basis vectors, graded elements, and the superbracket.
//!
//! The same bracket table drives both the half-integer-indexed algebra and
//! its Γ-graded generalization: an [`AlgebraInstance`] fixes the index
//! lattice (rank, generator realizations, the shift point `s`) and whether
//! the central charge is present. Index arithmetic happens on lattice
//! coordinates; realized field values only ever enter coefficients.

use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Which coset of the index group a point lives in: `Γ` itself or `Γ_s = s + Γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sector {
    Base,
    Shifted,
}

/// A point of `Γ ∪ Γ_s` in coordinates over the chosen generators of `Γ`,
/// with shifted points stored as their offset from `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaVector {
    pub coords: [i64; 2],
    pub sector: Sector,
}

impl GammaVector {
    pub fn base(coords: [i64; 2]) -> Self {
        GammaVector {
            coords,
            sector: Sector::Base,
        }
    }

    pub fn shifted(coords: [i64; 2]) -> Self {
        GammaVector {
            coords,
            sector: Sector::Shifted,
        }
    }

    pub fn zero() -> Self {
        GammaVector::base([0, 0])
    }

    pub fn is_zero(&self) -> bool {
        self == &GammaVector::zero()
    }

    /// Rank-1 index given in half-steps: `half_steps(2p)` is the point `p`.
    pub fn half_steps(two_p: i64) -> Self {
        if two_p.rem_euclid(2) == 0 {
            GammaVector::base([two_p / 2, 0])
        } else {
            GammaVector::shifted([(two_p - 1) / 2, 0])
        }
    }

    pub fn add(&self, rhs: &Self, inst: &AlgebraInstance) -> Self {
        let mut coords = [
            self.coords[0] + rhs.coords[0],
            self.coords[1] + rhs.coords[1],
        ];
        let sector = match (self.sector, rhs.sector) {
            (Sector::Base, Sector::Base) => Sector::Base,
            (Sector::Base, Sector::Shifted) | (Sector::Shifted, Sector::Base) => Sector::Shifted,
            (Sector::Shifted, Sector::Shifted) => {
                coords[0] += inst.s_double[0];
                coords[1] += inst.s_double[1];
                Sector::Base
            }
        };
        GammaVector { coords, sector }
    }

    pub fn neg(&self, inst: &AlgebraInstance) -> Self {
        match self.sector {
            Sector::Base => GammaVector::base([-self.coords[0], -self.coords[1]]),
            // −(s + x) = s + (−x − 2s)
            Sector::Shifted => GammaVector::shifted([
                -self.coords[0] - inst.s_double[0],
                -self.coords[1] - inst.s_double[1],
            ]),
        }
    }

    pub fn double(&self, inst: &AlgebraInstance) -> Self {
        self.add(self, inst)
    }

    /// The field value of this index. Injective and additive for every
    /// shipped instance.
    pub fn realize(&self, inst: &AlgebraInstance) -> Scalar {
        let mut v = Scalar::zero();
        for (c, g) in self.coords.iter().zip(&inst.generators) {
            if *c != 0 {
                v = &v + &(&Scalar::from_int(*c) * g);
            }
        }
        if self.sector == Sector::Shifted {
            v = &v + &inst.s_value;
        }
        v
    }

    pub fn render(&self, inst: &AlgebraInstance) -> String {
        if inst.rank == 1 {
            let doubled = 2 * self.coords[0]
                + match self.sector {
                    Sector::Base => 0,
                    Sector::Shifted => 1,
                };
            if doubled % 2 == 0 {
                format!("{}", doubled / 2)
            } else {
                format!("{doubled}/2")
            }
        } else {
            let mut out = String::new();
            let mut push = |piece: &str| {
                if out.is_empty() {
                    out.push_str(piece);
                } else if let Some(rest) = piece.strip_prefix('-') {
                    out.push('-');
                    out.push_str(rest);
                } else {
                    out.push('+');
                    out.push_str(piece);
                }
            };
            let [a, b] = self.coords;
            if a != 0 {
                push(&a.to_string());
            }
            match b {
                0 => {}
                1 => push("θ"),
                -1 => push("-θ"),
                _ => push(&format!("{b}*θ")),
            }
            if self.sector == Sector::Shifted {
                push("s");
            }
            if out.is_empty() {
                out.push('0');
            }
            out
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Basis-vector kinds in canonical print order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    L,
    T,
    G,
    C,
}

/// A basis vector of the algebra. `L` carries a `Γ` index, `T` a `Γ_s`
/// index, `G` either, and the central element `C` none.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisVector {
    pub kind: Kind,
    pub index: GammaVector,
}

impl BasisVector {
    pub fn l(index: GammaVector) -> Self {
        debug_assert_eq!(index.sector, Sector::Base);
        BasisVector { kind: Kind::L, index }
    }

    pub fn t(index: GammaVector) -> Self {
        debug_assert_eq!(index.sector, Sector::Shifted);
        BasisVector { kind: Kind::T, index }
    }

    pub fn g(index: GammaVector) -> Self {
        BasisVector { kind: Kind::G, index }
    }

    pub fn c() -> Self {
        BasisVector {
            kind: Kind::C,
            index: GammaVector::zero(),
        }
    }

    pub fn parity(&self) -> Parity {
        match self.kind {
            Kind::G => Parity::Odd,
            _ => Parity::Even,
        }
    }

    /// Grading degree: the index for `L`, `T`, `G`; zero for `C`.
    pub fn degree(&self) -> GammaVector {
        match self.kind {
            Kind::C => GammaVector::zero(),
            _ => self.index,
        }
    }

    pub fn render(&self, inst: &AlgebraInstance) -> String {
        match self.kind {
            Kind::C => "C".to_string(),
            Kind::L => format!("L({})", self.index.render(inst)),
            Kind::T => format!("T({})", self.index.render(inst)),
            Kind::G => format!("G({})", self.index.render(inst)),
        }
    }
}

/// Parity or degree of an element: zero, homogeneous of a single value, or
/// genuinely mixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity<T> {
    Zero,
    Homogeneous(T),
    Mixed,
}

impl<T: PartialEq> Homogeneity<T> {
    fn absorb(self, value: T) -> Self {
        match self {
            Homogeneity::Zero => Homogeneity::Homogeneous(value),
            Homogeneity::Homogeneous(v) if v == value => Homogeneity::Homogeneous(v),
            _ => Homogeneity::Mixed,
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Homogeneity::Homogeneous(v) => Some(v),
            _ => None,
        }
    }
}

/// A finite linear combination of basis vectors; zero coefficients are never
/// stored, so map equality is element equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<BasisVector, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(bv: BasisVector) -> Self {
        Element::term(bv, Scalar::one())
    }

    pub fn term(bv: BasisVector, coeff: Scalar) -> Self {
        let mut e = Element::zero();
        e.add_term(bv, coeff);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisVector, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, bv: &BasisVector) -> Scalar {
        self.terms.get(bv).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, bv: BasisVector, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(bv) {
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
        for (bv, c) in rhs.terms() {
            out.add_term(*bv, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (bv, c) in rhs.terms() {
            out.add_term(*bv, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Element {
            terms: self.terms.iter().map(|(bv, c)| (*bv, -c)).collect(),
        }
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        if factor.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self
                .terms
                .iter()
                .map(|(bv, c)| (*bv, c * factor))
                .collect(),
        }
    }

    pub fn parity_class(&self) -> Homogeneity<Parity> {
        let mut h = Homogeneity::Zero;
        for bv in self.terms.keys() {
            h = h.absorb(bv.parity());
        }
        h
    }

    pub fn degree_class(&self) -> Homogeneity<GammaVector> {
        let mut h = Homogeneity::Zero;
        for bv in self.terms.keys() {
            h = h.absorb(bv.degree());
        }
        h
    }

    /// Canonical text rendering, e.g. `4*L(0) + 1/2*C`.
    pub fn render(&self, inst: &AlgebraInstance) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (bv, coeff)) in self.terms.iter().enumerate() {
            let (neg, body) = match coeff.simple_factor() {
                Some((neg, mag)) if mag == "1" => (neg, bv.render(inst)),
                Some((neg, mag)) => (neg, format!("{mag}*{}", bv.render(inst))),
                None => (false, format!("({coeff})*{}", bv.render(inst))),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

/// Fixes the index lattice and central charge for one algebra.
#[derive(Clone, Debug)]
pub struct AlgebraInstance {
    pub name: String,
    pub rank: usize,
    /// Realized generators of `Γ`.
    pub generators: Vec<Scalar>,
    /// Realized value of the shift point `s` (with `s ∉ Γ`, `2s ∈ Γ`).
    pub s_value: Scalar,
    /// Coordinates of `2s` over the generators.
    pub s_double: [i64; 2],
    pub central_charge: bool,
}

impl AlgebraInstance {
    /// The half-integer-indexed algebra: `Γ = Z`, `s = 1/2`.
    pub fn twisted() -> Self {
        AlgebraInstance {
            name: "twisted".to_string(),
            rank: 1,
            generators: vec![Scalar::one()],
            s_value: Scalar::from_ratio(1, 2),
            s_double: [1, 0],
            central_charge: true,
        }
    }

    /// The rank-two lattice `Γ = Z + Zθ` with `s = 1/2` (so `2s = 1 ∈ Γ`).
    pub fn rank_two() -> Self {
        AlgebraInstance {
            name: "rank2".to_string(),
            rank: 2,
            generators: vec![Scalar::one(), Scalar::theta()],
            s_value: Scalar::from_ratio(1, 2),
            s_double: [1, 0],
            central_charge: true,
        }
    }

    pub fn without_central_charge(mut self) -> Self {
        self.central_charge = false;
        self
    }
}

/// Superbracket of two basis vectors.
pub fn bracket_basis(inst: &AlgebraInstance, x: &BasisVector, y: &BasisVector) -> Element {
    use Kind::*;
    let mut out = Element::zero();
    let third = Scalar::from_ratio(1, 3);
    match (x.kind, y.kind) {
        (C, _) | (_, C) => {}
        (L, L) => {
            let (g1, g2) = (x.index, y.index);
            let (r1, r2) = (g1.realize(inst), g2.realize(inst));
            let sum = g1.add(&g2, inst);
            out.add_term(BasisVector::l(sum), &r1 - &r2);
            if sum.is_zero() && inst.central_charge {
                let cubic = &(&r1 * &r1) * &r1;
                out.add_term(
                    BasisVector::c(),
                    &(&cubic - &r1) * &Scalar::from_ratio(1, 12),
                );
            }
        }
        (L, T) | (T, L) => {
            let (gamma, mu) = if x.kind == L {
                (x.index, y.index)
            } else {
                (y.index, x.index)
            };
            let mut coeff = -&mu.realize(inst);
            if x.kind == T {
                coeff = -&coeff;
            }
            out.add_term(BasisVector::t(mu.add(&gamma, inst)), coeff);
        }
        (T, T) => {
            if x.index.add(&y.index, inst).is_zero() && inst.central_charge {
                out.add_term(BasisVector::c(), &x.index.realize(inst) * &third);
            }
        }
        (L, G) | (G, L) => {
            let (gamma, u) = if x.kind == L {
                (x.index, y.index)
            } else {
                (y.index, x.index)
            };
            let mut coeff =
                &(&gamma.realize(inst) * &Scalar::from_ratio(1, 2)) - &u.realize(inst);
            if x.kind == G {
                coeff = -&coeff;
            }
            out.add_term(BasisVector::g(u.add(&gamma, inst)), coeff);
        }
        (T, G) | (G, T) => {
            let sum = x.index.add(&y.index, inst);
            let coeff = if x.kind == T {
                Scalar::one()
            } else {
                Scalar::from_int(-1)
            };
            out.add_term(BasisVector::g(sum), coeff);
        }
        (G, G) => {
            let (u, v) = (x.index, y.index);
            let sum = u.add(&v, inst);
            match (u.sector, v.sector) {
                (Sector::Base, Sector::Base) | (Sector::Shifted, Sector::Shifted) => {
                    let sign = if u.sector == Sector::Base {
                        Scalar::one()
                    } else {
                        Scalar::from_int(-1)
                    };
                    out.add_term(BasisVector::l(sum), &Scalar::from_int(2) * &sign);
                    if sum.is_zero() && inst.central_charge {
                        let ru = u.realize(inst);
                        let central =
                            &(&(&ru * &ru) - &Scalar::from_ratio(1, 4)) * &third;
                        out.add_term(BasisVector::c(), &central * &sign);
                    }
                }
                (Sector::Base, Sector::Shifted) => {
                    let coeff = &v.realize(inst) - &u.realize(inst);
                    out.add_term(BasisVector::t(sum), coeff);
                }
                (Sector::Shifted, Sector::Base) => {
                    let coeff = &u.realize(inst) - &v.realize(inst);
                    out.add_term(BasisVector::t(sum), coeff);
                }
            }
        }
    }
    out
}

/// Bilinear extension of [`bracket_basis`].
pub fn bracket(inst: &AlgebraInstance, x: &Element, y: &Element) -> Element {
    let mut out = Element::zero();
    for (bx, cx) in x.terms() {
        for (by, cy) in y.terms() {
            let factor = cx * cy;
            for (bz, cz) in bracket_basis(inst, bx, by).terms() {
                out.add_term(*bz, cz * &factor);
            }
        }
    }
    out
}

fn parity_sign(a: Parity, b: Parity) -> Scalar {
    if a == Parity::Odd && b == Parity::Odd {
        Scalar::from_int(-1)
    } else {
        Scalar::one()
    }
}

/// Super-Jacobi defect
/// `(−1)^{[x][z]}[[x,y],z] + (−1)^{[y][x]}[[y,z],x] + (−1)^{[z][y]}[[z,x],y]`;
/// zero for a valid bracket table.
pub fn jacobi_residual(
    inst: &AlgebraInstance,
    x: &BasisVector,
    y: &BasisVector,
    z: &BasisVector,
) -> Element {
    let cyclic = |a: &BasisVector, b: &BasisVector, c: &BasisVector| {
        bracket(inst, &bracket_basis(inst, a, b), &Element::basis(*c))
            .scale(&parity_sign(a.parity(), c.parity()))
    };
    cyclic(x, y, z)
        .add(&cyclic(y, z, x))
        .add(&cyclic(z, x, y))
}

/// Super-antisymmetry defect `[x,y] + (−1)^{[x][y]}[y,x]`.
pub fn antisymmetry_residual(
    inst: &AlgebraInstance,
    x: &BasisVector,
    y: &BasisVector,
) -> Element {
    bracket_basis(inst, x, y).add(
        &bracket_basis(inst, y, x).scale(&parity_sign(x.parity(), y.parity())),
    )
}

/// The inner derivation `ad(z): x ↦ [z, x]` as a reusable closure.
pub fn ad(inst: &AlgebraInstance, z: Element) -> impl Fn(&Element) -> Element + '_ {
    move |x| bracket(inst, &z, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn twisted() -> AlgebraInstance {
        AlgebraInstance::twisted()
    }

    fn l(two_p: i64) -> BasisVector {
        BasisVector::l(GammaVector::half_steps(two_p))
    }

    fn t(two_p: i64) -> BasisVector {
        BasisVector::t(GammaVector::half_steps(two_p))
    }

    fn g(two_p: i64) -> BasisVector {
        BasisVector::g(GammaVector::half_steps(two_p))
    }

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn virasoro_bracket_with_central_term() {
        let inst = twisted();
        let got = bracket_basis(&inst, &l(4), &l(-4));
        let mut want = Element::term(l(0), s(4));
        want.add_term(BasisVector::c(), Scalar::from_ratio(1, 2));
        assert_eq!(got, want);
    }

    #[test]
    fn t_t_bracket_is_purely_central() {
        let inst = twisted();
        let got = bracket_basis(&inst, &t(1), &t(-1));
        assert_eq!(got, Element::term(BasisVector::c(), Scalar::from_ratio(1, 6)));
    }

    #[test]
    fn g_g_bracket_at_half_has_no_central_part() {
        let inst = twisted();
        let got = bracket_basis(&inst, &g(1), &g(-1));
        assert_eq!(got, Element::term(l(0), s(-2)));
    }

    #[test]
    fn g_g_bracket_at_one_keeps_central_part() {
        let inst = twisted();
        let got = bracket_basis(&inst, &g(2), &g(-2));
        let mut want = Element::term(l(0), s(2));
        want.add_term(BasisVector::c(), Scalar::from_ratio(1, 4));
        assert_eq!(got, want);
    }

    #[test]
    fn mixed_sector_g_bracket_lands_in_t() {
        let inst = twisted();
        let got = bracket_basis(&inst, &g(0), &g(1));
        assert_eq!(got, Element::term(t(1), Scalar::from_ratio(1, 2)));
    }

    #[test]
    fn l_g_bracket_can_vanish() {
        let inst = twisted();
        assert!(bracket_basis(&inst, &l(2), &g(1)).is_zero());
    }

    #[test]
    fn central_element_brackets_to_zero() {
        let inst = twisted();
        for other in [l(2), t(1), g(-3), BasisVector::c()] {
            assert!(bracket_basis(&inst, &BasisVector::c(), &other).is_zero());
            assert!(bracket_basis(&inst, &other, &BasisVector::c()).is_zero());
        }
    }

    #[test]
    fn bracket_extends_bilinearly() {
        let inst = twisted();
        let mut x = Element::term(l(2), s(2));
        x.add_term(t(1), Scalar::one());
        let got = bracket(&inst, &x, &Element::basis(l(0)));
        let mut want = Element::term(l(2), s(2));
        want.add_term(t(1), Scalar::from_ratio(1, 2));
        assert_eq!(got, want);
        assert!(bracket(&inst, &x, &Element::zero()).is_zero());
    }

    #[test]
    fn odd_self_bracket_is_nonzero() {
        let inst = twisted();
        let x = Element::basis(g(1));
        assert_eq!(bracket(&inst, &x, &x), Element::term(l(2), s(-2)));
    }

    #[test]
    fn jacobi_residual_vanishes_on_samples() {
        let inst = twisted();
        assert!(jacobi_residual(&inst, &l(2), &l(-2), &l(0)).is_zero());
        assert!(jacobi_residual(&inst, &g(1), &g(-1), &g(0)).is_zero());
        assert!(jacobi_residual(&inst, &l(4), &t(1), &g(-2)).is_zero());
    }

    #[test]
    fn antisymmetry_residual_vanishes_on_samples() {
        let inst = twisted();
        assert!(antisymmetry_residual(&inst, &l(2), &l(4)).is_zero());
        assert!(antisymmetry_residual(&inst, &g(1), &g(2)).is_zero());
        assert!(antisymmetry_residual(&inst, &t(1), &g(0)).is_zero());
    }

    #[test]
    fn ad_matches_bracket_table() {
        let inst = twisted();
        let act = ad(&inst, Element::basis(l(0)));
        assert_eq!(
            act(&Element::basis(g(3))),
            Element::term(g(3), Scalar::from_ratio(-3, 2))
        );
        let central = ad(&inst, Element::basis(BasisVector::c()));
        assert!(central(&Element::basis(l(2))).is_zero());
        let odd = ad(&inst, Element::basis(g(1)));
        assert_eq!(
            odd(&Element::basis(l(4))),
            Element::term(g(5), Scalar::from_ratio(-1, 2))
        );
    }

    #[test]
    fn degree_and_parity_add_under_bracket() {
        let inst = twisted();
        let x = g(1);
        let y = t(3);
        let br = bracket_basis(&inst, &x, &y);
        assert_eq!(
            br.degree_class(),
            Homogeneity::Homogeneous(x.degree().add(&y.degree(), &inst))
        );
        assert_eq!(br.parity_class(), Homogeneity::Homogeneous(Parity::Odd));
    }

    #[test]
    fn rank_two_bracket_realizes_theta_coefficients() {
        let inst = AlgebraInstance::rank_two();
        let l_theta = BasisVector::l(GammaVector::base([0, 1]));
        let l_zero = BasisVector::l(GammaVector::zero());
        let got = bracket_basis(&inst, &l_theta, &l_zero);
        assert_eq!(got, Element::term(l_theta, Scalar::theta()));
    }

    #[test]
    fn rendering_follows_canonical_order() {
        let inst = twisted();
        let mut e = Element::term(l(0), s(4));
        e.add_term(BasisVector::c(), Scalar::from_ratio(1, 2));
        assert_eq!(e.render(&inst), "4*L(0) + 1/2*C");
        let neg = Element::term(g(3), Scalar::from_ratio(-3, 2));
        assert_eq!(neg.render(&inst), "-3/2*G(3/2)");
        assert_eq!(Element::zero().render(&inst), "0");
        let i_coeff = Element::term(g(-1), Scalar::i());
        assert_eq!(i_coeff.render(&inst), "i*G(-1/2)");
    }

    #[test]
    fn rank_two_rendering_uses_lattice_coordinates() {
        let inst = AlgebraInstance::rank_two();
        let e = Element::basis(BasisVector::l(GammaVector::base([1, 1])));
        assert_eq!(e.render(&inst), "L(1+θ)");
        let t = Element::basis(BasisVector::t(GammaVector::shifted([0, -1])));
        assert_eq!(t.render(&inst), "T(-θ+s)");
    }
}
