//! Cotorsion-pair and subcategory oracles over a base instance.
//!
//! An oracle is a stateless record of predicates and approximation
//! constructors.  The accessor methods re-validate every sequence an oracle
//! hands back — exactness, matching endpoints, and the advertised class
//! memberships — so unsound user-supplied oracles are caught at the call
//! site instead of corrupting a construction several levels later.

use std::sync::Arc;

use super::{
    direct_sum, factor_through_epi, factor_through_mono, BaseMorphism, BaseObject, BaseSES,
    Instance,
};
use crate::error::Error;
use crate::fp::Mat;

pub type ObjPredicate = Arc<dyn Fn(&BaseObject) -> bool + Send + Sync>;
pub type ApproxFn = Arc<dyn Fn(&BaseObject) -> Result<BaseSES, Error> + Send + Sync>;

#[derive(Clone)]
pub struct CotorsionPairOracle {
    name: String,
    instance: Instance,
    member_x: ObjPredicate,
    member_y: ObjPredicate,
    approx_cover: ApproxFn,
    approx_envelope: ApproxFn,
}

impl CotorsionPairOracle {
    pub fn new(
        name: impl Into<String>,
        instance: Instance,
        member_x: ObjPredicate,
        member_y: ObjPredicate,
        approx_cover: ApproxFn,
        approx_envelope: ApproxFn,
    ) -> CotorsionPairOracle {
        CotorsionPairOracle {
            name: name.into(),
            instance,
            member_x,
            member_y,
            approx_cover,
            approx_envelope,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn instance(&self) -> Instance {
        self.instance
    }

    pub fn member_x(&self, m: &BaseObject) -> bool {
        (self.member_x)(m)
    }

    pub fn member_y(&self, m: &BaseObject) -> bool {
        (self.member_y)(m)
    }

    /// Special cover `0 → B → A → m → 0` with `A ∈ X` and `B ∈ Y`, verified.
    pub fn cover(&self, m: &BaseObject) -> Result<BaseSES, Error> {
        let ses = (self.approx_cover)(m)?;
        let ctx = format!("pair `{}` cover", self.name);
        if ses.quotient() != m {
            return Err(Error::oracle(ctx, "cover does not end at the requested object"));
        }
        if !self.member_x(ses.middle()) {
            return Err(Error::oracle(ctx, "cover middle is not in the left class"));
        }
        if !self.member_y(ses.sub()) {
            return Err(Error::oracle(ctx, "cover kernel is not in the right class"));
        }
        Ok(ses)
    }

    /// Special envelope `0 → m → Y → X → 0` with `Y ∈ Y` and `X ∈ X`, verified.
    pub fn envelope(&self, m: &BaseObject) -> Result<BaseSES, Error> {
        let ses = (self.approx_envelope)(m)?;
        let ctx = format!("pair `{}` envelope", self.name);
        if ses.sub() != m {
            return Err(Error::oracle(ctx, "envelope does not start at the requested object"));
        }
        if !self.member_y(ses.middle()) {
            return Err(Error::oracle(ctx, "envelope middle is not in the right class"));
        }
        if !self.member_x(ses.quotient()) {
            return Err(Error::oracle(ctx, "envelope cokernel is not in the left class"));
        }
        Ok(ses)
    }
}

/// A special precovering/preenveloping subcategory, with the summand-closure
/// predicate required by the induced-pair construction and a small sample of
/// members for orthogonality probing.
#[derive(Clone)]
pub struct SubcategoryOracle {
    name: String,
    instance: Instance,
    member_l: ObjPredicate,
    member_smd: ObjPredicate,
    precover: Option<ApproxFn>,
    preenvelope: Option<ApproxFn>,
    sample: Vec<BaseObject>,
}

impl SubcategoryOracle {
    pub fn new(
        name: impl Into<String>,
        instance: Instance,
        member_l: ObjPredicate,
        member_smd: ObjPredicate,
        precover: Option<ApproxFn>,
        preenvelope: Option<ApproxFn>,
        sample: Vec<BaseObject>,
    ) -> SubcategoryOracle {
        SubcategoryOracle {
            name: name.into(),
            instance,
            member_l,
            member_smd,
            precover,
            preenvelope,
            sample,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn instance(&self) -> Instance {
        self.instance
    }

    pub fn member_l(&self, m: &BaseObject) -> bool {
        (self.member_l)(m)
    }

    pub fn member_smd(&self, m: &BaseObject) -> bool {
        (self.member_smd)(m)
    }

    pub fn sample(&self) -> &[BaseObject] {
        &self.sample
    }

    pub fn has_precover(&self) -> bool {
        self.precover.is_some()
    }

    pub fn has_preenvelope(&self) -> bool {
        self.preenvelope.is_some()
    }

    /// Special precover `0 → H → L → m → 0` with `L ∈ L`, verified.
    pub fn special_precover(&self, m: &BaseObject) -> Result<BaseSES, Error> {
        let ctx = format!("subcategory `{}` precover", self.name);
        let f = self
            .precover
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("`{}` is not precovering", self.name)))?;
        let ses = f(m)?;
        if ses.quotient() != m {
            return Err(Error::oracle(ctx, "precover does not end at the requested object"));
        }
        if !self.member_l(ses.middle()) {
            return Err(Error::oracle(ctx, "precover middle is not in the subcategory"));
        }
        Ok(ses)
    }

    /// Special preenvelope `0 → m → L → C → 0` with `L ∈ L`, verified.
    pub fn special_preenvelope(&self, m: &BaseObject) -> Result<BaseSES, Error> {
        let ctx = format!("subcategory `{}` preenvelope", self.name);
        let f = self
            .preenvelope
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("`{}` is not preenveloping", self.name)))?;
        let ses = f(m)?;
        if ses.sub() != m {
            return Err(Error::oracle(ctx, "preenvelope does not start at the requested object"));
        }
        if !self.member_l(ses.middle()) {
            return Err(Error::oracle(ctx, "preenvelope middle is not in the subcategory"));
        }
        Ok(ses)
    }
}

/// `0 → 0 → m → m → 0`.
pub fn identity_cover(m: &BaseObject) -> Result<BaseSES, Error> {
    let zero = m.instance().zero_object();
    BaseSES::new(BaseMorphism::zero(&zero, m), BaseMorphism::identity(m))
}

/// `0 → m → m → 0 → 0`.
pub fn identity_envelope(m: &BaseObject) -> Result<BaseSES, Error> {
    let zero = m.instance().zero_object();
    BaseSES::new(BaseMorphism::identity(m), BaseMorphism::zero(m, &zero))
}

pub enum PairHalf {
    /// Covers are available; envelopes get synthesized.
    CoverOnly(ApproxFn),
    /// Envelopes are available; covers get synthesized.
    EnvelopeOnly(ApproxFn),
}

/// Complete a one-sided pair oracle to a two-sided one.
///
/// Covers → envelopes: embed `m` into an injective `I`, specially cover
/// `I/m`, and pull back; the middle of the resulting `0 → m → E → X₀ → 0`
/// lies in `Y` by extension closure.  Envelopes → covers is the dual
/// construction through a projective presentation and a pushout.  Both
/// closure claims are re-verified on every call by the returned oracle.
pub fn salce_complete(
    name: impl Into<String>,
    instance: Instance,
    member_x: ObjPredicate,
    member_y: ObjPredicate,
    half: PairHalf,
) -> CotorsionPairOracle {
    match half {
        PairHalf::CoverOnly(cover) => {
            let cover_for_env = cover.clone();
            let envelope: ApproxFn = Arc::new(move |m: &BaseObject| {
                let inj = instance.injective_embed(m)?;
                let quot_cover = cover_for_env(inj.quotient())?;
                // pullback of I ↠ I/m ↞ A₀ inside I ⊕ A₀, kept as an explicit
                // kernel so m can be factored through its embedding
                let sum =
                    direct_sum(instance, &[inj.middle().clone(), quot_cover.middle().clone()])?;
                let glue = BaseMorphism::new(
                    sum.object.clone(),
                    inj.quotient().clone(),
                    inj.epi().matrix().hstack(&quot_cover.epi().matrix().neg()),
                )?;
                let (_, emb) = super::kernel(&glue);
                let to_a = sum.projections[1].compose(&emb)?;
                let combined = BaseMorphism::new(
                    m.clone(),
                    sum.object.clone(),
                    inj.mono()
                        .matrix()
                        .vstack(&Mat::zeros(instance.p(), quot_cover.middle().dim(), m.dim())),
                )?;
                let u = factor_through_mono(&combined, &emb)?;
                BaseSES::new(u, to_a)
            });
            CotorsionPairOracle::new(name, instance, member_x, member_y, cover, envelope)
        }
        PairHalf::EnvelopeOnly(envelope) => {
            let env_for_cover = envelope.clone();
            let cover: ApproxFn = Arc::new(move |m: &BaseObject| {
                let proj = instance.projective_cover(m)?;
                let sub_env = env_for_cover(proj.sub())?;
                // pushout of P₀ ↢ K ↪ Y₀ as an explicit cokernel on P₀ ⊕ Y₀
                let sum =
                    direct_sum(instance, &[proj.middle().clone(), sub_env.middle().clone()])?;
                let glue = BaseMorphism::new(
                    proj.sub().clone(),
                    sum.object.clone(),
                    proj.mono().matrix().vstack(&sub_env.mono().matrix().neg()),
                )?;
                let (_, coker_proj) = super::cokernel(&glue);
                let from_y = coker_proj.compose(&sum.injections[1])?;
                // (cover epi | 0) kills the glued image, so it descends to G
                let combined = BaseMorphism::new(
                    sum.object.clone(),
                    m.clone(),
                    proj.epi()
                        .matrix()
                        .hstack(&Mat::zeros(instance.p(), m.dim(), sub_env.middle().dim())),
                )?;
                let epi = factor_through_epi(&combined, &coker_proj)?;
                BaseSES::new(from_y, epi)
            });
            CotorsionPairOracle::new(name, instance, member_x, member_y, cover, envelope)
        }
    }
}

/// The complete cotorsion pairs shipped with each instance:
/// `(All, All)` for `FinVect`, and `(Free, All)`, `(All, Free)` for the dual
/// numbers, with minimal covers and envelopes.
pub fn builtin_pairs(instance: Instance) -> Vec<CotorsionPairOracle> {
    let all: ObjPredicate = Arc::new(|_| true);
    let free: ObjPredicate = Arc::new(BaseObject::is_free);
    let id_cover: ApproxFn = Arc::new(|m| identity_cover(m));
    let id_env: ApproxFn = Arc::new(|m| identity_envelope(m));
    let min_cover: ApproxFn = Arc::new(move |m: &BaseObject| m.instance().projective_cover(m));
    let min_env: ApproxFn = Arc::new(move |m: &BaseObject| m.instance().injective_embed(m));
    match instance {
        Instance::FinVect { .. } => vec![CotorsionPairOracle::new(
            "all-all",
            instance,
            all.clone(),
            all,
            id_cover,
            id_env,
        )],
        Instance::DualNumbers { .. } => vec![
            CotorsionPairOracle::new(
                "free-all",
                instance,
                free.clone(),
                all.clone(),
                min_cover,
                id_env,
            ),
            CotorsionPairOracle::new("all-free", instance, all, free, id_cover, min_env),
        ],
    }
}

pub fn pair_by_name(instance: Instance, name: &str) -> Result<CotorsionPairOracle, Error> {
    builtin_pairs(instance)
        .into_iter()
        .find(|p| p.name() == name)
        .ok_or_else(|| {
            Error::Unsupported(format!(
                "no built-in pair `{name}` over {}({})",
                instance.name(),
                instance.p()
            ))
        })
}

/// Built-in subcategory oracles:
///
/// * `evendim` over `FinVect` — even-dimensional spaces.  Additive and
///   extension-closed but not summand-closed; special precovers pad odd
///   dimensional targets by one line.
/// * `free` over the dual numbers — free modules, with minimal covers and
///   envelopes on both sides.
pub fn builtin_subcategories(instance: Instance) -> Vec<SubcategoryOracle> {
    match instance {
        Instance::FinVect { .. } => {
            let even: ObjPredicate = Arc::new(|m: &BaseObject| m.dim() % 2 == 0);
            let all: ObjPredicate = Arc::new(|_| true);
            let precover: ApproxFn = Arc::new(move |m: &BaseObject| {
                if m.dim() % 2 == 0 {
                    identity_cover(m)
                } else {
                    let line = BaseObject::vector_space(instance, 1);
                    let sum = direct_sum(instance, &[m.clone(), line.clone()])?;
                    let epi = BaseMorphism::new(
                        sum.object.clone(),
                        m.clone(),
                        sum.projections[0].matrix().clone(),
                    )?;
                    BaseSES::new(sum.injections[1].clone(), epi)
                }
            });
            let preenvelope: ApproxFn = Arc::new(move |m: &BaseObject| {
                if m.dim() % 2 == 0 {
                    identity_envelope(m)
                } else {
                    let line = BaseObject::vector_space(instance, 1);
                    let sum = direct_sum(instance, &[m.clone(), line.clone()])?;
                    BaseSES::new(sum.injections[0].clone(), sum.projections[1].clone())
                }
            });
            let sample = vec![
                instance.zero_object(),
                BaseObject::vector_space(instance, 2),
                BaseObject::vector_space(instance, 4),
            ];
            vec![SubcategoryOracle::new(
                "evendim",
                instance,
                even,
                all,
                Some(precover),
                Some(preenvelope),
                sample,
            )]
        }
        Instance::DualNumbers { .. } => {
            let free: ObjPredicate = Arc::new(BaseObject::is_free);
            let precover: ApproxFn = Arc::new(move |m: &BaseObject| instance.projective_cover(m));
            let preenvelope: ApproxFn = Arc::new(move |m: &BaseObject| instance.injective_embed(m));
            let sample = vec![instance.zero_object(), instance.free_object(1)];
            vec![SubcategoryOracle::new(
                "free",
                instance,
                free.clone(),
                free,
                Some(precover),
                Some(preenvelope),
                sample,
            )]
        }
    }
}

pub fn subcategory_by_name(instance: Instance, name: &str) -> Result<SubcategoryOracle, Error> {
    builtin_subcategories(instance)
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| {
            Error::Unsupported(format!(
                "no built-in subcategory `{name}` over {}({})",
                instance.name(),
                instance.p()
            ))
        })
}
