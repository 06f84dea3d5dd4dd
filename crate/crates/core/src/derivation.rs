//! Homogeneous-derivation machinery on truncated basis windows.
//!
//! A derivation of fixed parity and degree is determined by finitely many
//! image coefficients once restricted to a window. Solving the signed
//! Leibniz identity over all in-window pairs is one exact linear system;
//! the kernel, restricted to an inner window, is then matched against the
//! known inner derivations and the lattice-homomorphism family.

use crate::algebra::{
    bracket, bracket_basis, AlgebraInstance, BasisVector, Element, GammaVector, Homogeneity,
    Kind, Parity, Sector,
};
use crate::linalg::{solve_in_span, Rref, SparseRow};
use crate::scalar::Scalar;
use std::collections::{BTreeMap, HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DerivationError {
    #[error("evaluation escaped the window at {vector}")]
    OutOfWindow { vector: String },
    #[error("window too small: {detail}")]
    WindowTooSmall { detail: String },
    #[error("image of {vector} is not homogeneous of the declared parity and degree")]
    InhomogeneousImage { vector: String },
    #[error("image of the central element must stay in its span")]
    CentralImage,
    #[error("element is not parity-homogeneous")]
    MixedParity,
}

/// A box-shaped truncation of the index lattice, stored as per-coordinate
/// bounds on doubled realized coordinates (so half-integer bounds are exact).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    bound_x2: [i64; 2],
}

impl Window {
    /// Window with every index coordinate bounded by `n` in absolute value.
    pub fn integer(n: i64) -> Self {
        assert!(n >= 0);
        Window {
            bound_x2: [2 * n, 2 * n],
        }
    }

    /// Window bounded by `n/2` in the first coordinate (rank-1 use).
    pub fn half_steps(n_x2: i64) -> Self {
        assert!(n_x2 >= 0);
        Window {
            bound_x2: [n_x2, n_x2],
        }
    }

    fn doubled_coords(inst: &AlgebraInstance, v: &GammaVector) -> [i64; 2] {
        let shift = if v.sector == Sector::Shifted {
            inst.s_double
        } else {
            [0, 0]
        };
        [
            2 * v.coords[0] + shift[0],
            2 * v.coords[1] + shift[1],
        ]
    }

    pub fn contains(&self, inst: &AlgebraInstance, v: &GammaVector) -> bool {
        let d = Self::doubled_coords(inst, v);
        d[0].abs() <= self.bound_x2[0] && d[1].abs() <= self.bound_x2[1]
    }

    pub fn contains_basis(&self, inst: &AlgebraInstance, bv: &BasisVector) -> bool {
        bv.kind == Kind::C || self.contains(inst, &bv.index)
    }

    pub fn contains_element(&self, inst: &AlgebraInstance, e: &Element) -> bool {
        e.terms().all(|(bv, _)| self.contains_basis(inst, bv))
    }

    pub fn is_subwindow_of(&self, other: &Window) -> bool {
        self.bound_x2[0] <= other.bound_x2[0] && self.bound_x2[1] <= other.bound_x2[1]
    }

    /// Enlarges the window so every index reachable from it by a shift of
    /// `degree` stays representable.
    pub fn expanded_by(&self, inst: &AlgebraInstance, degree: &GammaVector) -> Window {
        let d = Self::doubled_coords(inst, degree);
        Window {
            bound_x2: [self.bound_x2[0] + d[0].abs(), self.bound_x2[1] + d[1].abs()],
        }
    }

    /// All window basis vectors in canonical order.
    pub fn basis(&self, inst: &AlgebraInstance) -> Vec<BasisVector> {
        let c0 = self.bound_x2[0] / 2 + 1;
        let c1 = if inst.rank > 1 {
            self.bound_x2[1] / 2 + 1
        } else {
            0
        };
        let mut out = Vec::new();
        for a in -c0..=c0 {
            for b in -c1..=c1 {
                for sector in [Sector::Base, Sector::Shifted] {
                    let v = GammaVector {
                        coords: [a, b],
                        sector,
                    };
                    if !self.contains(inst, &v) {
                        continue;
                    }
                    match sector {
                        Sector::Base => {
                            out.push(BasisVector::l(v));
                            out.push(BasisVector::g(v));
                        }
                        Sector::Shifted => {
                            out.push(BasisVector::t(v));
                            out.push(BasisVector::g(v));
                        }
                    }
                }
            }
        }
        if inst.central_charge {
            out.push(BasisVector::c());
        }
        out.sort_unstable();
        out
    }

    /// Unordered pairs of window basis vectors, diagonal included.
    pub fn pairs(&self, inst: &AlgebraInstance) -> Vec<(BasisVector, BasisVector)> {
        let basis = self.basis(inst);
        let mut out = Vec::with_capacity(basis.len() * (basis.len() + 1) / 2);
        for (i, x) in basis.iter().enumerate() {
            for y in &basis[i..] {
                out.push((*x, *y));
            }
        }
        out
    }

    /// The pairs from this window whose bracket support stays inside
    /// `domain`, i.e. the pairs a table defined on `domain` can check.
    pub fn pairs_into(
        &self,
        inst: &AlgebraInstance,
        domain: &Window,
    ) -> Vec<(BasisVector, BasisVector)> {
        self.pairs(inst)
            .into_iter()
            .filter(|(x, y)| domain.contains_element(inst, &bracket_basis(inst, x, y)))
            .collect()
    }

    /// Unordered triples of window basis vectors, repetitions included.
    pub fn triples(&self, inst: &AlgebraInstance) -> Vec<(BasisVector, BasisVector, BasisVector)> {
        let basis = self.basis(inst);
        let mut out = Vec::new();
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate().skip(i) {
                for z in &basis[j..] {
                    out.push((*x, *y, *z));
                }
            }
        }
        out
    }
}

/// A finitely supported homogeneous linear map given by images of window
/// basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationTable {
    pub parity: Parity,
    pub degree: GammaVector,
    pub window: Window,
    images: BTreeMap<BasisVector, Element>,
}

impl DerivationTable {
    pub fn new(
        inst: &AlgebraInstance,
        parity: Parity,
        degree: GammaVector,
        window: Window,
        mut images: BTreeMap<BasisVector, Element>,
    ) -> Result<Self, DerivationError> {
        for src in window.basis(inst) {
            images.entry(src).or_insert_with(Element::zero);
        }
        let table = DerivationTable {
            parity,
            degree,
            window,
            images,
        };
        table.validate(inst)?;
        Ok(table)
    }

    fn validate(&self, inst: &AlgebraInstance) -> Result<(), DerivationError> {
        for (src, image) in &self.images {
            if image.is_zero() {
                continue;
            }
            if src.kind == Kind::C {
                let central_only = image.terms().all(|(bv, _)| bv.kind == Kind::C);
                if !central_only || self.parity == Parity::Odd {
                    return Err(DerivationError::CentralImage);
                }
            }
            let want_degree = src.degree().add(&self.degree, inst);
            let want_parity = src.parity().add(self.parity);
            let degree_ok = image.degree_class() == Homogeneity::Homogeneous(want_degree);
            let parity_ok = image.parity_class() == Homogeneity::Homogeneous(want_parity);
            if !degree_ok || !parity_ok {
                return Err(DerivationError::InhomogeneousImage {
                    vector: src.render(inst),
                });
            }
        }
        Ok(())
    }

    /// The table of `ad(z)` restricted to a window; `z` must be homogeneous.
    pub fn of_ad(
        inst: &AlgebraInstance,
        z: &Element,
        window: Window,
    ) -> Result<Self, DerivationError> {
        let Homogeneity::Homogeneous(parity) = z.parity_class() else {
            return Err(DerivationError::MixedParity);
        };
        let Homogeneity::Homogeneous(degree) = z.degree_class() else {
            return Err(DerivationError::MixedParity);
        };
        let images = window
            .basis(inst)
            .iter()
            .map(|bv| (*bv, bracket(inst, z, &Element::basis(*bv))))
            .collect();
        DerivationTable::new(inst, parity, degree, window, images)
    }

    pub fn zero(
        inst: &AlgebraInstance,
        parity: Parity,
        degree: GammaVector,
        window: Window,
    ) -> Self {
        DerivationTable::new(inst, parity, degree, window, BTreeMap::new())
            .expect("zero table is always valid")
    }

    pub fn image(&self, bv: &BasisVector) -> Option<&Element> {
        self.images.get(bv)
    }

    pub fn images(&self) -> impl Iterator<Item = (&BasisVector, &Element)> {
        self.images.iter()
    }

    /// Overrides one image; used to build perturbed tables in checks.
    pub fn with_image(mut self, src: BasisVector, image: Element) -> Self {
        self.images.insert(src, image);
        self
    }

    /// Flat coordinates over the candidate-target layout of a window; two
    /// tables of equal parity and degree agree on the window iff these do.
    pub fn coordinates(&self, inst: &AlgebraInstance, window: &Window) -> Vec<Scalar> {
        let mut out = Vec::new();
        for src in window.basis(inst) {
            for tgt in target_candidates(inst, &src, self.parity, &self.degree) {
                out.push(
                    self.image(&src)
                        .map_or_else(Scalar::zero, |im| im.coeff(&tgt)),
                );
            }
        }
        out
    }

    pub fn apply(&self, inst: &AlgebraInstance, x: &Element) -> Result<Element, DerivationError> {
        let mut out = Element::zero();
        for (bv, c) in x.terms() {
            let image = self
                .images
                .get(bv)
                .ok_or_else(|| DerivationError::OutOfWindow {
                    vector: bv.render(inst),
                })?;
            out = out.add(&image.scale(c));
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        DerivationTable {
            parity: self.parity,
            degree: self.degree,
            window: self.window,
            images: self
                .images
                .iter()
                .map(|(bv, im)| (*bv, im.scale(factor)))
                .collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut images = self.images.clone();
        for (bv, im) in &rhs.images {
            let merged = images
                .get(bv)
                .map_or_else(|| im.clone(), |cur| cur.add(im));
            images.insert(*bv, merged);
        }
        DerivationTable {
            parity: self.parity,
            degree: self.degree,
            window: self.window,
            images,
        }
    }
}

/// Signed Leibniz defects `d([x,y]) − [d(x),y] − (−1)^{[d][x]}[x,d(y)]`,
/// one per pair, in pair order.
pub fn derivation_residuals(
    inst: &AlgebraInstance,
    d: &DerivationTable,
    pairs: &[(BasisVector, BasisVector)],
) -> Result<Vec<Element>, DerivationError> {
    let mut out = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        let bxy = bracket_basis(inst, x, y);
        let d_bxy = d.apply(inst, &bxy)?;
        let dx = d
            .image(x)
            .ok_or_else(|| DerivationError::OutOfWindow {
                vector: x.render(inst),
            })?
            .clone();
        let dy = d
            .image(y)
            .ok_or_else(|| DerivationError::OutOfWindow {
                vector: y.render(inst),
            })?
            .clone();
        let mut residual = d_bxy.sub(&bracket(inst, &dx, &Element::basis(*y)));
        let signed = bracket(inst, &Element::basis(*x), &dy);
        if d.parity == Parity::Odd && x.parity() == Parity::Odd {
            residual = residual.add(&signed);
        } else {
            residual = residual.sub(&signed);
        }
        out.push(residual);
    }
    Ok(out)
}

/// The normalized inner derivation of the given parity and degree, restricted
/// to a window: `ad(−G_p)` for odd parity, `ad(−L_0)`, `ad(L_p)` or `ad(T_p)`
/// for even parity according to where the degree lives.
pub fn inner_oracle(
    inst: &AlgebraInstance,
    window: Window,
    parity: Parity,
    degree: GammaVector,
) -> DerivationTable {
    let z = inner_oracle_element(parity, degree);
    DerivationTable::of_ad(inst, &z, window).expect("ad of a basis vector is a valid table")
}

fn inner_oracle_element(parity: Parity, degree: GammaVector) -> Element {
    match parity {
        Parity::Odd => Element::term(BasisVector::g(degree), Scalar::from_int(-1)),
        Parity::Even if degree.is_zero() => {
            Element::term(BasisVector::l(degree), Scalar::from_int(-1))
        }
        Parity::Even if degree.sector == Sector::Base => Element::basis(BasisVector::l(degree)),
        Parity::Even => Element::basis(BasisVector::t(degree)),
    }
}

/// Printable family label of the oracle, with the sign normalized away.
pub fn inner_oracle_name(inst: &AlgebraInstance, parity: Parity, degree: GammaVector) -> String {
    let bv = match parity {
        Parity::Odd => BasisVector::g(degree),
        Parity::Even if degree.is_zero() => BasisVector::l(degree),
        Parity::Even if degree.sector == Sector::Base => BasisVector::l(degree),
        Parity::Even => BasisVector::t(degree),
    };
    format!("ad({})", bv.render(inst))
}

/// An additive map `Γ → F` given by its values on the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaHom {
    pub values: Vec<Scalar>,
}

impl GammaHom {
    pub fn new(values: Vec<Scalar>) -> Self {
        GammaHom { values }
    }

    pub fn zero(rank: usize) -> Self {
        GammaHom {
            values: vec![Scalar::zero(); rank],
        }
    }

    /// The indicator sending generator `j` to 1 and the others to 0.
    pub fn indicator(rank: usize, j: usize) -> Self {
        let mut values = vec![Scalar::zero(); rank];
        values[j] = Scalar::one();
        GammaHom { values }
    }

    /// Value on a `Γ`-point given by lattice coordinates.
    pub fn eval_coords(&self, coords: [i64; 2]) -> Scalar {
        let mut v = Scalar::zero();
        for (c, val) in coords.iter().zip(&self.values) {
            if *c != 0 {
                v = &v + &(&Scalar::from_int(*c) * val);
            }
        }
        v
    }

    /// Value on any lattice point after doubling into `Γ`, halved:
    /// `φ(2u)/2`; agrees with `φ(u)` on `Γ` itself.
    pub fn eval_halved_double(&self, inst: &AlgebraInstance, u: &GammaVector) -> Scalar {
        let doubled = u.double(inst);
        debug_assert_eq!(doubled.sector, Sector::Base);
        &self.eval_coords(doubled.coords) * &Scalar::from_ratio(1, 2)
    }
}

/// The diagonal derivation `δ_φ` of a lattice homomorphism, restricted to a
/// window: `L_γ ↦ φ(γ)L_γ`, `T_μ ↦ ½φ(2μ)T_μ`, likewise on `G`, and `C ↦ 0`.
pub fn delta_phi(inst: &AlgebraInstance, phi: &GammaHom, window: Window) -> DerivationTable {
    let mut images = BTreeMap::new();
    for bv in window.basis(inst) {
        let coeff = match bv.kind {
            Kind::C => Scalar::zero(),
            _ => match bv.index.sector {
                Sector::Base => phi.eval_coords(bv.index.coords),
                Sector::Shifted => phi.eval_halved_double(inst, &bv.index),
            },
        };
        images.insert(bv, Element::term(bv, coeff));
    }
    DerivationTable::new(inst, Parity::Even, GammaVector::zero(), window, images)
        .expect("δ_φ is diagonal, hence homogeneous of degree zero")
}

/// How one restricted kernel vector relates to the known derivations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchLine {
    /// A scalar multiple of the inner oracle.
    Inner { coefficient: Scalar },
    /// A combination of the `δ_φ` generator indicators (degree-zero even case).
    HomSpan { coefficients: Vec<Scalar> },
    Unmatched,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub instance: String,
    pub parity: Parity,
    pub degree: GammaVector,
    pub outer: Window,
    pub inner: Window,
    pub unknowns: usize,
    pub dimension: usize,
    pub oracle_name: String,
    pub matches: Vec<MatchLine>,
    /// Canonical basis of the kernel restricted to the inner window.
    pub restricted_tables: Vec<DerivationTable>,
    /// Kernel basis on the full solve domain, same order as found.
    pub full_tables: Vec<DerivationTable>,
}

impl SolveReport {
    pub fn all_matched(&self) -> bool {
        self.matches
            .iter()
            .all(|m| !matches!(m, MatchLine::Unmatched))
    }
}

fn target_candidates(
    inst: &AlgebraInstance,
    src: &BasisVector,
    parity: Parity,
    degree: &GammaVector,
) -> Vec<BasisVector> {
    if src.kind == Kind::C {
        // The center maps into its own span; only the degree-zero even
        // component can carry it.
        if parity == Parity::Even && degree.is_zero() && inst.central_charge {
            return vec![BasisVector::c()];
        }
        return Vec::new();
    }
    let tdeg = src.degree().add(degree, inst);
    let tpar = src.parity().add(parity);
    match (tpar, tdeg.sector) {
        (Parity::Odd, _) => vec![BasisVector::g(tdeg)],
        (Parity::Even, Sector::Base) => {
            let mut v = vec![BasisVector::l(tdeg)];
            if tdeg.is_zero() && inst.central_charge {
                v.push(BasisVector::c());
            }
            v
        }
        (Parity::Even, Sector::Shifted) => vec![BasisVector::t(tdeg)],
    }
}

/// Coordinates of a table over an unknown layout; the table must be
/// supported on the layout's candidate targets.
fn table_coords(
    table: &DerivationTable,
    layout: &[(BasisVector, BasisVector)],
    col_of: &HashMap<(BasisVector, BasisVector), usize>,
) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); layout.len()];
    for (src, image) in table.images() {
        for (tgt, c) in image.terms() {
            if let Some(&j) = col_of.get(&(*src, *tgt)) {
                v[j] = c.clone();
            }
        }
    }
    v
}

/// Assembles and solves the derivation identity on `B_outer`, restricts the
/// kernel to `B_inner`, and reports its dimension together with a match of
/// each restricted basis vector against the inner oracle (and, in the
/// degree-zero even case, the `δ_φ` family).
pub fn solve_derivation_space(
    inst: &AlgebraInstance,
    parity: Parity,
    degree: GammaVector,
    outer: Window,
    inner: Window,
) -> Result<SolveReport, DerivationError> {
    let degree_x2 = {
        let d = Window::doubled_coords(inst, &degree);
        [d[0].abs(), d[1].abs()]
    };
    for (j, d) in degree_x2.iter().enumerate().take(inst.rank.min(2)) {
        let shift = d.max(&2);
        if inner.bound_x2[j] + 2 * shift > outer.bound_x2[j] {
            return Err(DerivationError::WindowTooSmall {
                detail: format!(
                    "inner bound {} plus twice the maximal index shift {} exceeds outer bound {}",
                    inner.bound_x2[j],
                    shift,
                    outer.bound_x2[j]
                ),
            });
        }
    }
    if inst.central_charge && outer.bound_x2[0] < 4 {
        return Err(DerivationError::WindowTooSmall {
            detail: "central-term constraints need an outer bound of at least 2".to_string(),
        });
    }

    let domain = outer.expanded_by(inst, &degree);
    let domain_basis = domain.basis(inst);

    let mut layout: Vec<(BasisVector, BasisVector)> = Vec::new();
    for src in &domain_basis {
        for tgt in target_candidates(inst, src, parity, &degree) {
            layout.push((*src, tgt));
        }
    }
    let col_of: HashMap<(BasisVector, BasisVector), usize> = layout
        .iter()
        .enumerate()
        .map(|(j, key)| (*key, j))
        .collect();

    // One residual per (pair, target basis vector); rows are deduplicated
    // before elimination since many pairs repeat the same relation.
    let mut rref = Rref::new();
    let mut seen: HashSet<SparseRow> = HashSet::new();
    let odd_d = parity == Parity::Odd;
    for (x, y) in outer.pairs(inst) {
        let bxy = bracket_basis(inst, &x, &y);
        if !domain.contains_element(inst, &bxy) {
            continue;
        }
        let mut rows: BTreeMap<BasisVector, BTreeMap<usize, Scalar>> = BTreeMap::new();
        let mut accumulate = |tgt: BasisVector, col: usize, coeff: Scalar| {
            if coeff.is_zero() {
                return;
            }
            let row = rows.entry(tgt).or_default();
            let entry = row.entry(col).or_insert_with(Scalar::zero);
            *entry = &*entry + &coeff;
        };
        for (b, c) in bxy.terms() {
            for tgt in target_candidates(inst, b, parity, &degree) {
                accumulate(tgt, col_of[&(*b, tgt)], c.clone());
            }
        }
        for tgt in target_candidates(inst, &x, parity, &degree) {
            let col = col_of[&(x, tgt)];
            for (b2, c2) in bracket_basis(inst, &tgt, &y).terms() {
                accumulate(*b2, col, -c2);
            }
        }
        let sign_flip = odd_d && x.parity() == Parity::Odd;
        for tgt in target_candidates(inst, &y, parity, &degree) {
            let col = col_of[&(y, tgt)];
            for (b2, c2) in bracket_basis(inst, &x, &tgt).terms() {
                let c = if sign_flip { c2.clone() } else { -c2 };
                accumulate(*b2, col, c);
            }
        }
        for (_, row) in rows {
            let sparse: SparseRow = row
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            if sparse.is_empty() {
                continue;
            }
            let lead_inv = sparse[0].1.checked_inv().unwrap();
            let normalized: SparseRow = sparse
                .iter()
                .map(|(j, c)| (*j, c * &lead_inv))
                .collect();
            if seen.insert(normalized.clone()) {
                rref.insert(normalized);
            }
        }
    }

    let kernel = rref.kernel(layout.len());
    let table_of = |coords: &[Scalar], window: Window| -> DerivationTable {
        let mut images: BTreeMap<BasisVector, Element> = BTreeMap::new();
        for (j, (src, tgt)) in layout.iter().enumerate() {
            if coords[j].is_zero() {
                continue;
            }
            images
                .entry(*src)
                .or_insert_with(Element::zero)
                .add_term(*tgt, coords[j].clone());
        }
        images.retain(|src, _| window.contains_basis(inst, src));
        DerivationTable::new(inst, parity, degree, window, images)
            .expect("kernel vectors are homogeneous by construction")
    };
    let full_tables: Vec<DerivationTable> =
        kernel.iter().map(|v| table_of(v, domain)).collect();

    // Restrict to the inner window and take the canonical basis of the span.
    let inner_cols: Vec<usize> = layout
        .iter()
        .enumerate()
        .filter(|(_, (src, _))| inner.contains_basis(inst, src))
        .map(|(j, _)| j)
        .collect();
    let mut restricted_rref = Rref::new();
    for v in &kernel {
        let row: SparseRow = inner_cols
            .iter()
            .enumerate()
            .filter(|(_, &j)| !v[j].is_zero())
            .map(|(k, &j)| (k, v[j].clone()))
            .collect();
        restricted_rref.insert(row);
    }
    let restricted_vectors: Vec<Vec<Scalar>> = restricted_rref
        .pivot_cols()
        .collect::<Vec<_>>()
        .into_iter()
        .map(|c| {
            let row = restricted_rref.pivot_row(c);
            let mut dense = vec![Scalar::zero(); inner_cols.len()];
            for (k, val) in row {
                dense[*k] = val.clone();
            }
            dense
        })
        .collect();
    let dimension = restricted_vectors.len();

    let restrict_table = |t: &DerivationTable| -> Vec<Scalar> {
        let full = table_coords(t, &layout, &col_of);
        inner_cols.iter().map(|&j| full[j].clone()).collect()
    };
    let oracle = inner_oracle(inst, inner, parity, degree);
    let oracle_coords = restrict_table(&oracle);
    let hom_family: Vec<Vec<Scalar>> = if parity == Parity::Even && degree.is_zero() {
        (0..inst.rank)
            .map(|j| restrict_table(&delta_phi(inst, &GammaHom::indicator(inst.rank, j), inner)))
            .collect()
    } else {
        Vec::new()
    };

    let mut matches = Vec::with_capacity(dimension);
    for v in &restricted_vectors {
        let inner_match = solve_in_span(v, std::slice::from_ref(&oracle_coords))
            .expect("layout lengths agree");
        if let Some(c) = inner_match {
            matches.push(MatchLine::Inner {
                coefficient: c[0].clone(),
            });
            continue;
        }
        if !hom_family.is_empty() {
            if let Some(c) = solve_in_span(v, &hom_family).expect("layout lengths agree") {
                matches.push(MatchLine::HomSpan { coefficients: c });
                continue;
            }
        }
        matches.push(MatchLine::Unmatched);
    }

    let restricted_tables = restricted_vectors
        .iter()
        .map(|v| {
            let mut full = vec![Scalar::zero(); layout.len()];
            for (k, &j) in inner_cols.iter().enumerate() {
                full[j] = v[k].clone();
            }
            table_of(&full, inner)
        })
        .collect();

    Ok(SolveReport {
        instance: inst.name.clone(),
        parity,
        degree,
        outer,
        inner,
        unknowns: layout.len(),
        dimension,
        oracle_name: inner_oracle_name(inst, parity, degree),
        matches,
        restricted_tables,
        full_tables,
    })
}
