//! The pluggable base categories and their exact-sequence toolkit.
//!
//! Two finitely-computable abelian categories are built in:
//!
//! * `FinVect(p)` — finite dimensional F_p vector spaces.  Semisimple: every
//!   object is projective and injective and Ext¹ vanishes identically.
//! * `DualNumbers(p)` — finite modules over Λ = F_p[ε]/(ε²), encoded as a
//!   vector space together with the square-zero matrix by which ε acts.
//!   Free, projective and injective modules all coincide, and a module is
//!   free exactly when `2·rank(ε) = dim`.
//!
//! Objects are compared on the nose (instance, dimension, and ε-action all
//! equal); [`BaseObject::iso_eq`] is the coarser isomorphism test.  Morphisms
//! are matrices acting on column vectors and are validated for ε-linearity
//! at construction, so an ill-formed map never circulates.

pub mod oracle;

use crate::error::Error;
use crate::fp::{is_prime, Mat, MatSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instance {
    FinVect { p: u64 },
    DualNumbers { p: u64 },
}

impl Instance {
    pub fn finvect(p: u64) -> Result<Instance, Error> {
        if is_prime(p) {
            Ok(Instance::FinVect { p })
        } else {
            Err(Error::InvalidModulus(p))
        }
    }

    pub fn dual_numbers(p: u64) -> Result<Instance, Error> {
        if is_prime(p) {
            Ok(Instance::DualNumbers { p })
        } else {
            Err(Error::InvalidModulus(p))
        }
    }

    pub fn p(self) -> u64 {
        match self {
            Instance::FinVect { p } | Instance::DualNumbers { p } => p,
        }
    }

    pub fn is_dual(self) -> bool {
        matches!(self, Instance::DualNumbers { .. })
    }

    pub fn name(self) -> &'static str {
        match self {
            Instance::FinVect { .. } => "finvect",
            Instance::DualNumbers { .. } => "dual",
        }
    }

    pub fn zero_object(self) -> BaseObject {
        match self {
            Instance::FinVect { .. } => BaseObject { instance: self, dim: 0, nil: None },
            Instance::DualNumbers { p } => {
                BaseObject { instance: self, dim: 0, nil: Some(Mat::zeros(p, 0, 0)) }
            }
        }
    }

    /// The free object of the given rank: `F_p^rank`, respectively `Λ^rank`
    /// in the canonical basis (generators first, then their ε-multiples).
    pub fn free_object(self, rank: usize) -> BaseObject {
        match self {
            Instance::FinVect { .. } => {
                BaseObject { instance: self, dim: rank, nil: None }
            }
            Instance::DualNumbers { p } => {
                let mut nil = Mat::zeros(p, 2 * rank, 2 * rank);
                for i in 0..rank {
                    nil.set(rank + i, i, 1);
                }
                BaseObject { instance: self, dim: 2 * rank, nil: Some(nil) }
            }
        }
    }

    /// Minimal projective cover `0 → Ω → P → m → 0`.  Identity for
    /// `FinVect`; the minimal free cover `Λ^{dim(m/εm)} ↠ m` for the dual
    /// numbers.
    pub fn projective_cover(self, m: &BaseObject) -> Result<BaseSES, Error> {
        assert_eq!(m.instance, self);
        match self {
            Instance::FinVect { .. } => {
                let epi = BaseMorphism::identity(m);
                let mono = BaseMorphism::zero(&self.zero_object(), m);
                BaseSES::new(mono, epi)
            }
            Instance::DualNumbers { .. } => {
                let cover = free_cover_epi(m)?;
                let (_, emb) = kernel(&cover);
                BaseSES::new(emb, cover)
            }
        }
    }

    /// Minimal injective embedding `0 → m → I → C → 0`.  Identity for
    /// `FinVect`; the embedding `m ↪ Λ^{dim soc m}` for the dual numbers.
    pub fn injective_embed(self, m: &BaseObject) -> Result<BaseSES, Error> {
        assert_eq!(m.instance, self);
        match self {
            Instance::FinVect { .. } => {
                let mono = BaseMorphism::identity(m);
                let epi = BaseMorphism::zero(m, &self.zero_object());
                BaseSES::new(mono, epi)
            }
            Instance::DualNumbers { .. } => {
                let env = free_envelope_mono(m)?;
                let (_, proj) = cokernel(&env);
                BaseSES::new(env, proj)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseObject {
    instance: Instance,
    dim: usize,
    nil: Option<Mat>,
}

impl BaseObject {
    /// The semisimple object of the given dimension: `F_p^dim`, or `k^dim`
    /// (trivial ε-action) over the dual numbers.
    pub fn vector_space(instance: Instance, dim: usize) -> BaseObject {
        match instance {
            Instance::FinVect { .. } => BaseObject { instance, dim, nil: None },
            Instance::DualNumbers { p } => {
                BaseObject { instance, dim, nil: Some(Mat::zeros(p, dim, dim)) }
            }
        }
    }

    /// A dual-numbers module from its underlying space and ε-action.
    pub fn module(instance: Instance, dim: usize, nil: Mat) -> Result<BaseObject, Error> {
        let Instance::DualNumbers { p } = instance else {
            return Err(Error::Unsupported(
                "explicit ε-action only makes sense over the dual numbers".into(),
            ));
        };
        if nil.p() != p || nil.rows() != dim || nil.cols() != dim {
            return Err(Error::Shape(format!(
                "ε-action must be a {dim}x{dim} matrix over F_{p}"
            )));
        }
        if !nil.matmul(&nil).is_zero() {
            return Err(Error::Shape("ε-action must square to zero".into()));
        }
        Ok(BaseObject { instance, dim, nil: Some(nil) })
    }

    pub fn instance(&self) -> Instance {
        self.instance
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nil(&self) -> Option<&Mat> {
        self.nil.as_ref()
    }

    /// The ε-action as a matrix; zero for `FinVect` so generic code can stay
    /// uniform.
    pub fn action(&self) -> Mat {
        match &self.nil {
            Some(n) => n.clone(),
            None => Mat::zeros(self.instance.p(), self.dim, self.dim),
        }
    }

    pub fn nil_rank(&self) -> usize {
        self.nil.as_ref().map_or(0, Mat::rank)
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// Free = projective = injective in both built-in instances.
    pub fn is_free(&self) -> bool {
        match self.instance {
            Instance::FinVect { .. } => true,
            Instance::DualNumbers { .. } => 2 * self.nil_rank() == self.dim,
        }
    }

    /// Isomorphism test: dimension alone over `FinVect`; dimension plus
    /// ε-rank over the dual numbers (these classify `Λ^a ⊕ k^b`).
    pub fn iso_eq(&self, other: &BaseObject) -> bool {
        self.instance == other.instance
            && self.dim == other.dim
            && self.nil_rank() == other.nil_rank()
    }

    /// The F_p-linear dual, with transposed ε-action.
    pub fn dual(&self) -> BaseObject {
        BaseObject {
            instance: self.instance,
            dim: self.dim,
            nil: self.nil.as_ref().map(Mat::transpose),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseMorphism {
    domain: BaseObject,
    codomain: BaseObject,
    matrix: Mat,
}

impl BaseMorphism {
    pub fn new(domain: BaseObject, codomain: BaseObject, matrix: Mat) -> Result<BaseMorphism, Error> {
        if domain.instance != codomain.instance {
            return Err(Error::InstanceMismatch);
        }
        if matrix.rows() != codomain.dim || matrix.cols() != domain.dim || matrix.p() != domain.instance.p() {
            return Err(Error::Shape(format!(
                "morphism matrix is {}x{} over F_{}, expected {}x{} over F_{}",
                matrix.rows(),
                matrix.cols(),
                matrix.p(),
                codomain.dim,
                domain.dim,
                domain.instance.p()
            )));
        }
        if domain.instance.is_dual() {
            let lhs = matrix.matmul(domain.nil().unwrap());
            let rhs = codomain.nil().unwrap().matmul(&matrix);
            if lhs != rhs {
                return Err(Error::NotAMorphism("matrix does not commute with the ε-action".into()));
            }
        }
        Ok(BaseMorphism { domain, codomain, matrix })
    }

    pub fn identity(obj: &BaseObject) -> BaseMorphism {
        BaseMorphism {
            domain: obj.clone(),
            codomain: obj.clone(),
            matrix: Mat::identity(obj.instance.p(), obj.dim),
        }
    }

    pub fn zero(domain: &BaseObject, codomain: &BaseObject) -> BaseMorphism {
        assert_eq!(domain.instance, codomain.instance);
        BaseMorphism {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: Mat::zeros(domain.instance.p(), codomain.dim, domain.dim),
        }
    }

    pub fn domain(&self) -> &BaseObject {
        &self.domain
    }

    pub fn codomain(&self) -> &BaseObject {
        &self.codomain
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &BaseMorphism) -> Result<BaseMorphism, Error> {
        if first.codomain != self.domain {
            return Err(Error::Shape("composition endpoints do not match".into()));
        }
        Ok(BaseMorphism {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.matmul(&first.matrix),
        })
    }

    pub fn add(&self, other: &BaseMorphism) -> Result<BaseMorphism, Error> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::Shape("sum of morphisms with different endpoints".into()));
        }
        Ok(BaseMorphism {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.add(&other.matrix),
        })
    }

    pub fn is_mono(&self) -> bool {
        self.matrix.rank() == self.domain.dim
    }

    pub fn is_epi(&self) -> bool {
        self.matrix.rank() == self.codomain.dim
    }

    pub fn is_iso(&self) -> bool {
        self.domain.dim == self.codomain.dim && self.matrix.rank() == self.dim_common()
    }

    fn dim_common(&self) -> usize {
        self.domain.dim
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// The dual morphism between the dual objects (transposed matrix).
    pub fn dual(&self) -> BaseMorphism {
        BaseMorphism {
            domain: self.codomain.dual(),
            codomain: self.domain.dual(),
            matrix: self.matrix.transpose(),
        }
    }
}

/// A certified short exact sequence `0 → sub → middle → quotient → 0`.
///
/// The constructor refuses anything that is not exact: injectivity,
/// surjectivity, composite zero, and the rank count `dim sub + dim quotient
/// = dim middle` are all checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSES {
    mono: BaseMorphism,
    epi: BaseMorphism,
}

impl BaseSES {
    pub fn new(mono: BaseMorphism, epi: BaseMorphism) -> Result<BaseSES, Error> {
        if mono.codomain != epi.domain {
            return Err(Error::NotExact("mono codomain differs from epi domain".into()));
        }
        if !mono.is_mono() {
            return Err(Error::NotExact("left map is not injective".into()));
        }
        if !epi.is_epi() {
            return Err(Error::NotExact("right map is not surjective".into()));
        }
        if !epi.matrix.matmul(&mono.matrix).is_zero() {
            return Err(Error::NotExact("composite is nonzero".into()));
        }
        if mono.domain.dim + epi.codomain.dim != mono.codomain.dim {
            return Err(Error::NotExact("dimension count fails in the middle".into()));
        }
        Ok(BaseSES { mono, epi })
    }

    pub fn mono(&self) -> &BaseMorphism {
        &self.mono
    }

    pub fn epi(&self) -> &BaseMorphism {
        &self.epi
    }

    pub fn sub(&self) -> &BaseObject {
        &self.mono.domain
    }

    pub fn middle(&self) -> &BaseObject {
        &self.mono.codomain
    }

    pub fn quotient(&self) -> &BaseObject {
        &self.epi.codomain
    }
}

pub struct DirectSum {
    pub object: BaseObject,
    pub injections: Vec<BaseMorphism>,
    pub projections: Vec<BaseMorphism>,
}

/// Biproduct in declaration order, with block-diagonal ε-action.
pub fn direct_sum(instance: Instance, parts: &[BaseObject]) -> Result<DirectSum, Error> {
    if parts.iter().any(|o| o.instance != instance) {
        return Err(Error::InstanceMismatch);
    }
    let p = instance.p();
    let total: usize = parts.iter().map(BaseObject::dim).sum();
    let object = match instance {
        Instance::FinVect { .. } => BaseObject { instance, dim: total, nil: None },
        Instance::DualNumbers { .. } => {
            let blocks: Vec<Mat> = parts.iter().map(BaseObject::action).collect();
            BaseObject { instance, dim: total, nil: Some(Mat::block_diag(p, &blocks)) }
        }
    };
    let mut injections = Vec::with_capacity(parts.len());
    let mut projections = Vec::with_capacity(parts.len());
    let mut offset = 0;
    for part in parts {
        let mut inj = Mat::zeros(p, total, part.dim);
        let mut proj = Mat::zeros(p, part.dim, total);
        for i in 0..part.dim {
            inj.set(offset + i, i, 1);
            proj.set(i, offset + i, 1);
        }
        injections.push(BaseMorphism {
            domain: part.clone(),
            codomain: object.clone(),
            matrix: inj,
        });
        projections.push(BaseMorphism {
            domain: object.clone(),
            codomain: part.clone(),
            matrix: proj,
        });
        offset += part.dim;
    }
    Ok(DirectSum { object, injections, projections })
}

/// Kernel object with its canonical embedding.  Over the dual numbers the
/// kernel inherits the unique ε-action making the embedding a morphism.
pub fn kernel(f: &BaseMorphism) -> (BaseObject, BaseMorphism) {
    let emb = f.matrix.kernel_basis();
    let kdim = emb.cols();
    let object = match f.domain.instance {
        Instance::FinVect { .. } => {
            BaseObject { instance: f.domain.instance, dim: kdim, nil: None }
        }
        Instance::DualNumbers { .. } => {
            let n_dom = f.domain.nil().unwrap();
            let rhs = n_dom.matmul(&emb);
            let nil = emb.solve(&rhs).expect("ε-action preserves kernels");
            assert!(nil.matmul(&nil).is_zero(), "induced kernel action squares to zero");
            BaseObject { instance: f.domain.instance, dim: kdim, nil: Some(nil) }
        }
    };
    let emb = BaseMorphism { domain: object.clone(), codomain: f.domain.clone(), matrix: emb };
    (object, emb)
}

/// Cokernel object with its canonical projection; dual to [`kernel`].
pub fn cokernel(f: &BaseMorphism) -> (BaseObject, BaseMorphism) {
    let proj = f.matrix.cokernel_projection();
    let cdim = proj.rows();
    let object = match f.codomain.instance {
        Instance::FinVect { .. } => {
            BaseObject { instance: f.codomain.instance, dim: cdim, nil: None }
        }
        Instance::DualNumbers { .. } => {
            let n_cod = f.codomain.nil().unwrap();
            // unique N with N ∘ proj = proj ∘ n_cod, solved via transposes
            let rhs = proj.matmul(n_cod).transpose();
            let nil = proj
                .transpose()
                .solve(&rhs)
                .expect("ε-action descends to cokernels")
                .transpose();
            assert!(nil.matmul(&nil).is_zero(), "induced cokernel action squares to zero");
            BaseObject { instance: f.codomain.instance, dim: cdim, nil: Some(nil) }
        }
    };
    let proj = BaseMorphism { domain: f.codomain.clone(), codomain: object.clone(), matrix: proj };
    (object, proj)
}

pub struct KernelCokernel {
    pub kernel: BaseObject,
    pub kernel_embedding: BaseMorphism,
    pub cokernel: BaseObject,
    pub cokernel_projection: BaseMorphism,
}

pub fn kernel_cokernel(f: &BaseMorphism) -> KernelCokernel {
    let (k, ke) = kernel(f);
    let (c, cp) = cokernel(f);
    KernelCokernel { kernel: k, kernel_embedding: ke, cokernel: c, cokernel_projection: cp }
}

/// Deterministic basis of the hom space, ordered by the row-major position
/// of the leading unknown (for `FinVect` this is exactly the elementary
/// matrices in row-major order).
pub fn hom_basis(m: &BaseObject, n: &BaseObject) -> Result<Vec<BaseMorphism>, Error> {
    if m.instance != n.instance {
        return Err(Error::InstanceMismatch);
    }
    let p = m.instance.p();
    let mut sys = MatSystem::new(p, vec![(n.dim, m.dim)]);
    if m.instance.is_dual() {
        let zero = Mat::zeros(p, n.dim, m.dim);
        let neg_ncod = n.nil().unwrap().neg();
        sys.add_equation(
            &[(0, None, Some(m.nil().unwrap())), (0, Some(&neg_ncod), None)],
            &zero,
        );
    }
    Ok(sys
        .kernel()
        .into_iter()
        .map(|mut sol| BaseMorphism {
            domain: m.clone(),
            codomain: n.clone(),
            matrix: sol.pop().unwrap(),
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorMode {
    /// Given `g: M → Z` and an epi `e: Y → Z`, find `f: M → Y` with `e∘f = g`.
    LiftOverEpi,
    /// Given `g: M → Z` and a mono `m: M → Y`, find `f: Y → Z` with `f∘m = g`.
    ExtendAlongMono,
}

/// Solve a one-sided factorization problem exactly.  Returns `Ok(None)` when
/// the linear system (including ε-linearity of the unknown) is inconsistent,
/// i.e. no such morphism exists.
pub fn solve_factorization(
    g: &BaseMorphism,
    through: &BaseMorphism,
    mode: FactorMode,
) -> Result<Option<BaseMorphism>, Error> {
    let p = g.domain.instance.p();
    match mode {
        FactorMode::LiftOverEpi => {
            if through.codomain != g.codomain {
                return Err(Error::Shape("lift: epi codomain must match g codomain".into()));
            }
            if !through.is_epi() {
                return Err(Error::NotAMorphism("lift target map is not an epimorphism".into()));
            }
            let dom = &g.domain;
            let mid = &through.domain;
            let mut sys = MatSystem::new(p, vec![(mid.dim, dom.dim)]);
            sys.add_equation(&[(0, Some(&through.matrix), None)], &g.matrix);
            if dom.instance.is_dual() {
                let zero = Mat::zeros(p, mid.dim, dom.dim);
                let neg = mid.nil().unwrap().neg();
                sys.add_equation(&[(0, None, Some(dom.nil().unwrap())), (0, Some(&neg), None)], &zero);
            }
            Ok(sys.solve_particular().map(|mut sol| BaseMorphism {
                domain: dom.clone(),
                codomain: mid.clone(),
                matrix: sol.pop().unwrap(),
            }))
        }
        FactorMode::ExtendAlongMono => {
            if through.domain != g.domain {
                return Err(Error::Shape("extend: mono domain must match g domain".into()));
            }
            if !through.is_mono() {
                return Err(Error::NotAMorphism("extension base map is not a monomorphism".into()));
            }
            let mid = &through.codomain;
            let cod = &g.codomain;
            let mut sys = MatSystem::new(p, vec![(cod.dim, mid.dim)]);
            sys.add_equation(&[(0, None, Some(&through.matrix))], &g.matrix);
            if mid.instance.is_dual() {
                let zero = Mat::zeros(p, cod.dim, mid.dim);
                let neg = cod.nil().unwrap().neg();
                sys.add_equation(&[(0, None, Some(mid.nil().unwrap())), (0, Some(&neg), None)], &zero);
            }
            Ok(sys.solve_particular().map(|mut sol| BaseMorphism {
                domain: mid.clone(),
                codomain: cod.clone(),
                matrix: sol.pop().unwrap(),
            }))
        }
    }
}

/// Factor `g: M → Y` through a monomorphism `emb: P ↪ Y`, producing the
/// unique `u: M → P` with `emb ∘ u = g`.  Errors when `im g ⊄ im emb`.
pub fn factor_through_mono(g: &BaseMorphism, emb: &BaseMorphism) -> Result<BaseMorphism, Error> {
    if emb.codomain != g.codomain {
        return Err(Error::Shape("mono factorization: codomains must match".into()));
    }
    if !emb.is_mono() {
        return Err(Error::NotAMorphism("factorization base map is not a monomorphism".into()));
    }
    let u = emb.matrix.solve(&g.matrix).ok_or_else(|| {
        Error::NoSolution("image does not factor through the monomorphism".into())
    })?;
    // u is unique against a mono, so ε-linearity is automatic; `new` re-checks
    BaseMorphism::new(g.domain.clone(), emb.domain.clone(), u)
}

/// Descend `g: Y → Z` along an epimorphism `proj: Y ↠ Q`, producing the
/// unique `u: Q → Z` with `u ∘ proj = g`.  Errors when `g` does not kill
/// `ker proj`.
pub fn factor_through_epi(g: &BaseMorphism, proj: &BaseMorphism) -> Result<BaseMorphism, Error> {
    if proj.domain != g.domain {
        return Err(Error::Shape("epi factorization: domains must match".into()));
    }
    if !proj.is_epi() {
        return Err(Error::NotAMorphism("factorization base map is not an epimorphism".into()));
    }
    let ut = proj
        .matrix
        .transpose()
        .solve(&g.matrix.transpose())
        .ok_or_else(|| Error::NoSolution("map does not descend along the epimorphism".into()))?;
    BaseMorphism::new(proj.codomain.clone(), g.codomain.clone(), ut.transpose())
}

/// Pullback of `f: A → C ← B :g`, returned with its two projections.
pub fn pullback(
    f: &BaseMorphism,
    g: &BaseMorphism,
) -> Result<(BaseObject, BaseMorphism, BaseMorphism), Error> {
    if f.codomain != g.codomain {
        return Err(Error::Shape("pullback legs must share a codomain".into()));
    }
    let instance = f.domain.instance;
    let sum = direct_sum(instance, &[f.domain.clone(), g.domain.clone()])?;
    let combined = BaseMorphism::new(
        sum.object.clone(),
        f.codomain.clone(),
        f.matrix.hstack(&g.matrix.neg()),
    )?;
    let (pb, emb) = kernel(&combined);
    let to_a = sum.projections[0].compose(&emb)?;
    let to_b = sum.projections[1].compose(&emb)?;
    debug_assert_eq!(
        f.compose(&to_a).unwrap().matrix,
        g.compose(&to_b).unwrap().matrix
    );
    Ok((pb, to_a, to_b))
}

/// Pushout of `A ← C → B`, returned with its two injections.
pub fn pushout(
    f: &BaseMorphism,
    g: &BaseMorphism,
) -> Result<(BaseObject, BaseMorphism, BaseMorphism), Error> {
    if f.domain != g.domain {
        return Err(Error::Shape("pushout legs must share a domain".into()));
    }
    let instance = f.codomain.instance;
    let sum = direct_sum(instance, &[f.codomain.clone(), g.codomain.clone()])?;
    let combined = BaseMorphism::new(
        f.domain.clone(),
        sum.object.clone(),
        f.matrix.vstack(&g.matrix.neg()),
    )?;
    let (po, proj) = cokernel(&combined);
    let from_a = proj.compose(&sum.injections[0])?;
    let from_b = proj.compose(&sum.injections[1])?;
    debug_assert_eq!(
        from_a.compose(f).unwrap().matrix,
        from_b.compose(g).unwrap().matrix
    );
    Ok((po, from_a, from_b))
}

/// The minimal free cover epi `Λ^r ↠ m` over the dual numbers, where
/// `r = dim(m/εm)`.  Generators are sent to the standard basis vectors at
/// the canonical complement coordinates of `im ε`.
fn free_cover_epi(m: &BaseObject) -> Result<BaseMorphism, Error> {
    let nil = m.nil().expect("free covers live over the dual numbers");
    let p = m.instance.p();
    let pivots: std::collections::HashSet<usize> =
        nil.transpose().rref().pivots.into_iter().collect();
    let gens: Vec<usize> = (0..m.dim).filter(|i| !pivots.contains(i)).collect();
    let rank = gens.len();
    let free = m.instance.free_object(rank);
    let mut matrix = Mat::zeros(p, m.dim, 2 * rank);
    for (k, &j) in gens.iter().enumerate() {
        matrix.set(j, k, 1);
        for r in 0..m.dim {
            matrix.set(r, rank + k, nil.get(r, j));
        }
    }
    let cover = BaseMorphism::new(free, m.clone(), matrix)?;
    if !cover.is_epi() {
        return Err(Error::oracle("free cover", "constructed cover is not surjective"));
    }
    Ok(cover)
}

/// The minimal free envelope mono `m ↪ Λ^s` over the dual numbers, where
/// `s = dim soc m`; obtained by dualizing the free cover of the dual module.
fn free_envelope_mono(m: &BaseObject) -> Result<BaseMorphism, Error> {
    let cover = free_cover_epi(&m.dual())?;
    let rank = cover.domain().dim / 2;
    let p = m.instance.p();
    // identify (Λ^s)* with Λ^s by swapping the generator and socle blocks
    let mut swap = Mat::zeros(p, 2 * rank, 2 * rank);
    for i in 0..rank {
        swap.set(i, rank + i, 1);
        swap.set(rank + i, i, 1);
    }
    let matrix = swap.matmul(&cover.matrix().transpose());
    let env = BaseMorphism::new(m.clone(), m.instance.free_object(rank), matrix)?;
    if !env.is_mono() {
        return Err(Error::oracle("free envelope", "constructed envelope is not injective"));
    }
    Ok(env)
}
