//! Representations of a finite quiver in a base instance.
//!
//! A representation assigns a base object to every vertex and a base
//! morphism to every arrow.  This module provides the functor-category
//! toolkit the construction engines run on: validated morphisms and short
//! exact sequences, direct sums, the per-vertex structure maps
//! `φ_i: ⊕_{a: •→i} X(s(a)) → X(i)` and `ψ_i: X(i) → ⊕_{a: i→•} X(t(a))`
//! with their cokernels and kernels, the adjoint functors `f_i ⊣ eval_i ⊣
//! g_i`, hom-space bases, and the vertexwise special approximation that
//! seeds every tower construction.
//!
//! Direct-sum summands are always indexed in declaration order — of arrows
//! for structure maps and of paths (lexicographically by arrow order) for
//! the adjoints — so every matrix in sight is reproducible byte for byte.

use std::collections::HashMap;
use std::sync::Arc;

use crate::base::oracle::CotorsionPairOracle;
use crate::base::{
    self, direct_sum, factor_through_epi, factor_through_mono, solve_factorization, BaseMorphism,
    BaseObject, BaseSES, FactorMode, Instance,
};
use crate::error::Error;
use crate::fp::{Mat, MatSystem};
use crate::quiver::{Quiver, Side};

#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    quiver: Arc<Quiver>,
    instance: Instance,
    objects: Vec<BaseObject>,
    maps: Vec<BaseMorphism>,
}

impl Representation {
    pub fn new(
        quiver: Arc<Quiver>,
        instance: Instance,
        objects: Vec<BaseObject>,
        maps: Vec<BaseMorphism>,
    ) -> Result<Representation, Error> {
        if objects.len() != quiver.vertex_count() {
            return Err(Error::Shape(format!(
                "expected {} vertex objects, got {}",
                quiver.vertex_count(),
                objects.len()
            )));
        }
        if maps.len() != quiver.arrow_count() {
            return Err(Error::Shape(format!(
                "expected {} arrow maps, got {}",
                quiver.arrow_count(),
                maps.len()
            )));
        }
        if objects.iter().any(|o| o.instance() != instance) {
            return Err(Error::InstanceMismatch);
        }
        for (k, a) in quiver.arrows().iter().enumerate() {
            if maps[k].domain() != &objects[a.src] || maps[k].codomain() != &objects[a.tgt] {
                return Err(Error::Shape(format!(
                    "map for arrow `{}` does not run {} → {}",
                    a.id,
                    quiver.vertex_name(a.src),
                    quiver.vertex_name(a.tgt)
                )));
            }
        }
        Ok(Representation { quiver, instance, objects, maps })
    }

    pub fn zero(quiver: Arc<Quiver>, instance: Instance) -> Representation {
        let z = instance.zero_object();
        let objects = vec![z.clone(); quiver.vertex_count()];
        let maps = vec![BaseMorphism::zero(&z, &z); quiver.arrow_count()];
        Representation { quiver, instance, objects, maps }
    }

    /// The representation with `obj` at one vertex and zero elsewhere.
    pub fn stalk(quiver: Arc<Quiver>, vertex: usize, obj: BaseObject) -> Representation {
        let instance = obj.instance();
        let z = instance.zero_object();
        let objects: Vec<BaseObject> = (0..quiver.vertex_count())
            .map(|v| if v == vertex { obj.clone() } else { z.clone() })
            .collect();
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| BaseMorphism::zero(&objects[a.src], &objects[a.tgt]))
            .collect();
        Representation { quiver, instance, objects, maps }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn instance(&self) -> Instance {
        self.instance
    }

    pub fn object(&self, v: usize) -> &BaseObject {
        &self.objects[v]
    }

    pub fn objects(&self) -> &[BaseObject] {
        &self.objects
    }

    pub fn arrow_map(&self, k: usize) -> &BaseMorphism {
        &self.maps[k]
    }

    pub fn arrow_maps(&self) -> &[BaseMorphism] {
        &self.maps
    }

    pub fn dims(&self) -> Vec<usize> {
        self.objects.iter().map(BaseObject::dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.objects.iter().map(BaseObject::dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// The incoming structure map `φ_v: ⊕_{a: •→v} X(s(a)) → X(v)`, with the
    /// contributing arrows (declaration order) and the summand bookkeeping.
    pub fn incoming_map(&self, v: usize) -> Result<StructureMap, Error> {
        let arrows = self.quiver.incident_arrows(v, Side::Into);
        let parts: Vec<BaseObject> =
            arrows.iter().map(|&k| self.objects[self.quiver.arrows()[k].src].clone()).collect();
        let sum = direct_sum(self.instance, &parts)?;
        let matrix = if arrows.is_empty() {
            Mat::zeros(self.instance.p(), self.objects[v].dim(), 0)
        } else {
            let blocks: Vec<Mat> = arrows.iter().map(|&k| self.maps[k].matrix().clone()).collect();
            Mat::hstack_all(self.instance.p(), &blocks)
        };
        let map = BaseMorphism::new(sum.object.clone(), self.objects[v].clone(), matrix)?;
        Ok(StructureMap { vertex: v, arrows, sum, map })
    }

    /// The outgoing structure map `ψ_v: X(v) → ⊕_{a: v→•} X(t(a))`.
    pub fn outgoing_map(&self, v: usize) -> Result<StructureMap, Error> {
        let arrows = self.quiver.incident_arrows(v, Side::OutOf);
        let parts: Vec<BaseObject> =
            arrows.iter().map(|&k| self.objects[self.quiver.arrows()[k].tgt].clone()).collect();
        let sum = direct_sum(self.instance, &parts)?;
        let matrix = if arrows.is_empty() {
            Mat::zeros(self.instance.p(), 0, self.objects[v].dim())
        } else {
            let blocks: Vec<Mat> = arrows.iter().map(|&k| self.maps[k].matrix().clone()).collect();
            Mat::vstack_all(self.instance.p(), &blocks)
        };
        let map = BaseMorphism::new(self.objects[v].clone(), sum.object.clone(), matrix)?;
        Ok(StructureMap { vertex: v, arrows, sum, map })
    }

    /// `C_v = coker φ_v` with its projection.
    pub fn incoming_cokernel(&self, v: usize) -> Result<(BaseObject, BaseMorphism), Error> {
        Ok(base::cokernel(&self.incoming_map(v)?.map))
    }

    /// `K_v = ker ψ_v` with its embedding.
    pub fn outgoing_kernel(&self, v: usize) -> Result<(BaseObject, BaseMorphism), Error> {
        Ok(base::kernel(&self.outgoing_map(v)?.map))
    }
}

/// A structure map at a vertex together with its direct-sum bookkeeping:
/// `arrows[t]` is the arrow whose summand occupies slot `t` of `sum`.
pub struct StructureMap {
    pub vertex: usize,
    pub arrows: Vec<usize>,
    pub sum: base::DirectSum,
    pub map: BaseMorphism,
}

#[derive(Clone, Debug)]
pub struct RepMorphism {
    domain: Representation,
    codomain: Representation,
    components: Vec<BaseMorphism>,
}

impl RepMorphism {
    /// Validates shapes and every naturality square exactly.
    pub fn new(
        domain: Representation,
        codomain: Representation,
        components: Vec<BaseMorphism>,
    ) -> Result<RepMorphism, Error> {
        if domain.quiver != codomain.quiver {
            return Err(Error::Shape("morphism endpoints live over different quivers".into()));
        }
        if domain.instance != codomain.instance {
            return Err(Error::InstanceMismatch);
        }
        if components.len() != domain.quiver.vertex_count() {
            return Err(Error::Shape("one component per vertex required".into()));
        }
        for (v, c) in components.iter().enumerate() {
            if c.domain() != &domain.objects[v] || c.codomain() != &codomain.objects[v] {
                return Err(Error::Shape(format!(
                    "component at `{}` has wrong endpoints",
                    domain.quiver.vertex_name(v)
                )));
            }
        }
        for (k, a) in domain.quiver.arrows().iter().enumerate() {
            let left = components[a.tgt].compose(&domain.maps[k])?;
            let right = codomain.maps[k].compose(&components[a.src])?;
            if left.matrix() != right.matrix() {
                return Err(Error::NotAMorphism(format!(
                    "naturality fails on arrow `{}`",
                    a.id
                )));
            }
        }
        Ok(RepMorphism { domain, codomain, components })
    }

    pub fn identity(rep: &Representation) -> RepMorphism {
        let components = rep.objects.iter().map(BaseMorphism::identity).collect();
        RepMorphism { domain: rep.clone(), codomain: rep.clone(), components }
    }

    pub fn zero(domain: &Representation, codomain: &Representation) -> RepMorphism {
        let components = domain
            .objects
            .iter()
            .zip(&codomain.objects)
            .map(|(d, c)| BaseMorphism::zero(d, c))
            .collect();
        RepMorphism { domain: domain.clone(), codomain: codomain.clone(), components }
    }

    pub fn domain(&self) -> &Representation {
        &self.domain
    }

    pub fn codomain(&self) -> &Representation {
        &self.codomain
    }

    pub fn component(&self, v: usize) -> &BaseMorphism {
        &self.components[v]
    }

    pub fn components(&self) -> &[BaseMorphism] {
        &self.components
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &RepMorphism) -> Result<RepMorphism, Error> {
        if first.codomain != self.domain {
            return Err(Error::Shape("composition endpoints do not meet".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&first.components)
            .map(|(g, f)| g.compose(f))
            .collect::<Result<_, _>>()?;
        Ok(RepMorphism {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            components,
        })
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().all(BaseMorphism::is_mono)
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().all(BaseMorphism::is_epi)
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(BaseMorphism::is_iso)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(BaseMorphism::is_zero)
    }
}

/// A vertexwise short exact sequence of representations; the constructor
/// re-certifies exactness at every vertex.
#[derive(Clone, Debug)]
pub struct RepSES {
    mono: RepMorphism,
    epi: RepMorphism,
}

impl RepSES {
    pub fn new(mono: RepMorphism, epi: RepMorphism) -> Result<RepSES, Error> {
        if mono.codomain != epi.domain {
            return Err(Error::NotExact("mono codomain differs from epi domain".into()));
        }
        for v in 0..mono.domain.quiver.vertex_count() {
            BaseSES::new(mono.components[v].clone(), epi.components[v].clone()).map_err(|e| {
                Error::NotExact(format!(
                    "not exact at vertex `{}`: {e}",
                    mono.domain.quiver.vertex_name(v)
                ))
            })?;
        }
        Ok(RepSES { mono, epi })
    }

    pub fn mono(&self) -> &RepMorphism {
        &self.mono
    }

    pub fn epi(&self) -> &RepMorphism {
        &self.epi
    }

    pub fn sub(&self) -> &Representation {
        &self.mono.domain
    }

    pub fn middle(&self) -> &Representation {
        &self.mono.codomain
    }

    pub fn quotient(&self) -> &Representation {
        &self.epi.codomain
    }

    /// The base-level exact sequence this restricts to at one vertex.
    pub fn at_vertex(&self, v: usize) -> BaseSES {
        BaseSES::new(self.mono.components[v].clone(), self.epi.components[v].clone())
            .expect("validated at construction")
    }
}

pub struct RepDirectSum {
    pub rep: Representation,
    pub injections: Vec<RepMorphism>,
    pub projections: Vec<RepMorphism>,
}

pub fn rep_direct_sum(
    quiver: &Arc<Quiver>,
    instance: Instance,
    parts: &[Representation],
) -> Result<RepDirectSum, Error> {
    if parts.iter().any(|r| &r.quiver != quiver || r.instance != instance) {
        return Err(Error::Shape("direct sum parts must share quiver and instance".into()));
    }
    let p = instance.p();
    let mut objects = Vec::with_capacity(quiver.vertex_count());
    let mut sums = Vec::with_capacity(quiver.vertex_count());
    for v in 0..quiver.vertex_count() {
        let vertex_parts: Vec<BaseObject> = parts.iter().map(|r| r.objects[v].clone()).collect();
        let s = direct_sum(instance, &vertex_parts)?;
        objects.push(s.object.clone());
        sums.push(s);
    }
    let mut maps = Vec::with_capacity(quiver.arrow_count());
    for (k, a) in quiver.arrows().iter().enumerate() {
        let blocks: Vec<Mat> = parts.iter().map(|r| r.maps[k].matrix().clone()).collect();
        let matrix = if parts.is_empty() {
            Mat::zeros(p, 0, 0)
        } else {
            Mat::block_diag(p, &blocks)
        };
        maps.push(BaseMorphism::new(objects[a.src].clone(), objects[a.tgt].clone(), matrix)?);
    }
    let rep = Representation::new(quiver.clone(), instance, objects, maps)?;
    let mut injections = Vec::with_capacity(parts.len());
    let mut projections = Vec::with_capacity(parts.len());
    for (t, part) in parts.iter().enumerate() {
        let inj: Vec<BaseMorphism> = sums.iter().map(|s| s.injections[t].clone()).collect();
        let proj: Vec<BaseMorphism> = sums.iter().map(|s| s.projections[t].clone()).collect();
        injections.push(RepMorphism::new(part.clone(), rep.clone(), inj)?);
        projections.push(RepMorphism::new(rep.clone(), part.clone(), proj)?);
    }
    Ok(RepDirectSum { rep, injections, projections })
}

/// Left adjoint to evaluation at `vertex`: one copy of `m` for every path
/// leaving `vertex`, with arrow maps sending the copy at `p` identically to
/// the copy at `p·a`.  Evaluation back at `vertex` recovers `m` on the nose
/// as the cokernel of the incoming structure map.
pub fn f_free(
    quiver: &Arc<Quiver>,
    vertex: usize,
    m: &BaseObject,
) -> Result<Representation, Error> {
    let instance = m.instance();
    let p = instance.p();
    let dm = m.dim();
    let n = quiver.vertex_count();
    let mut paths = Vec::with_capacity(n);
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(n);
    for j in 0..n {
        let ps = quiver.enumerate_paths(vertex, j)?;
        index.push(ps.iter().enumerate().map(|(t, q)| (q.clone(), t)).collect());
        paths.push(ps);
    }
    let mut objects = Vec::with_capacity(n);
    for ps in &paths {
        objects.push(direct_sum(instance, &vec![m.clone(); ps.len()])?.object);
    }
    let mut maps = Vec::with_capacity(quiver.arrow_count());
    for (k, a) in quiver.arrows().iter().enumerate() {
        let mut matrix = Mat::zeros(p, objects[a.tgt].dim(), objects[a.src].dim());
        for (pi, path) in paths[a.src].iter().enumerate() {
            let mut extended = path.clone();
            extended.push(k);
            let qi = index[a.tgt][&extended];
            for r in 0..dm {
                matrix.set(qi * dm + r, pi * dm + r, 1);
            }
        }
        maps.push(BaseMorphism::new(objects[a.src].clone(), objects[a.tgt].clone(), matrix)?);
    }
    Representation::new(quiver.clone(), instance, objects, maps)
}

/// Right adjoint to evaluation at `vertex`: the dual of [`f_free`] over the
/// opposite quiver, so one copy of `m` for every path into `vertex`.
/// Evaluation recovers `m` on the nose as the kernel of the outgoing
/// structure map.
pub fn g_cofree(
    quiver: &Arc<Quiver>,
    vertex: usize,
    m: &BaseObject,
) -> Result<Representation, Error> {
    let op = Arc::new(quiver.opposite());
    let f = f_free(&op, vertex, &m.dual())?;
    let objects: Vec<BaseObject> = f.objects.iter().map(BaseObject::dual).collect();
    // arrow k of the opposite quiver runs t(a) → s(a); dualizing flips it back
    let maps: Vec<BaseMorphism> = f.maps.iter().map(BaseMorphism::dual).collect();
    Representation::new(quiver.clone(), m.instance(), objects, maps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassSide {
    /// Every incoming structure map is mono with cokernel in the test class.
    Phi,
    /// Every outgoing structure map is epi with kernel in the test class.
    Psi,
}

#[derive(Clone, Debug)]
pub struct VertexClassCheck {
    pub vertex: usize,
    /// φ_v mono (resp. ψ_v epi).
    pub structural_ok: bool,
    /// The cokernel (resp. kernel) lies in the test class.
    pub member_ok: bool,
}

#[derive(Clone, Debug)]
pub struct ClassReport {
    pub side: ClassSide,
    pub pass: bool,
    pub vertices: Vec<VertexClassCheck>,
}

/// Decide membership in Φ(class) or Ψ(class) vertex by vertex.
pub fn class_membership<F>(
    rep: &Representation,
    side: ClassSide,
    member: F,
) -> Result<ClassReport, Error>
where
    F: Fn(&BaseObject) -> bool,
{
    let mut vertices = Vec::with_capacity(rep.quiver.vertex_count());
    for v in 0..rep.quiver.vertex_count() {
        let check = match side {
            ClassSide::Phi => {
                let sm = rep.incoming_map(v)?;
                let (c, _) = base::cokernel(&sm.map);
                VertexClassCheck {
                    vertex: v,
                    structural_ok: sm.map.is_mono(),
                    member_ok: member(&c),
                }
            }
            ClassSide::Psi => {
                let sm = rep.outgoing_map(v)?;
                let (k, _) = base::kernel(&sm.map);
                VertexClassCheck {
                    vertex: v,
                    structural_ok: sm.map.is_epi(),
                    member_ok: member(&k),
                }
            }
        };
        vertices.push(check);
    }
    let pass = vertices.iter().all(|c| c.structural_ok && c.member_ok);
    Ok(ClassReport { side, pass, vertices })
}

fn hom_system(x: &Representation, y: &Representation) -> Result<MatSystem, Error> {
    if x.quiver != y.quiver {
        return Err(Error::Shape("hom endpoints live over different quivers".into()));
    }
    if x.instance != y.instance {
        return Err(Error::InstanceMismatch);
    }
    let p = x.instance.p();
    let n = x.quiver.vertex_count();
    let shapes: Vec<(usize, usize)> =
        (0..n).map(|v| (y.objects[v].dim(), x.objects[v].dim())).collect();
    let mut sys = MatSystem::new(p, shapes);
    for (k, a) in x.quiver.arrows().iter().enumerate() {
        let zero = Mat::zeros(p, y.objects[a.tgt].dim(), x.objects[a.src].dim());
        let neg = y.maps[k].matrix().neg();
        sys.add_equation(
            &[(a.tgt, None, Some(x.maps[k].matrix())), (a.src, Some(&neg), None)],
            &zero,
        );
    }
    if x.instance.is_dual() {
        for v in 0..n {
            let zero = Mat::zeros(p, y.objects[v].dim(), x.objects[v].dim());
            let neg = y.objects[v].nil().unwrap().neg();
            sys.add_equation(
                &[(v, None, Some(x.objects[v].nil().unwrap())), (v, Some(&neg), None)],
                &zero,
            );
        }
    }
    Ok(sys)
}

/// Deterministic basis of the space of morphisms `x → y`.
pub fn hom_rep_basis(x: &Representation, y: &Representation) -> Result<Vec<RepMorphism>, Error> {
    hom_system(x, y)?
        .kernel()
        .into_iter()
        .map(|mats| {
            let components = mats
                .into_iter()
                .enumerate()
                .map(|(v, m)| BaseMorphism::new(x.objects[v].clone(), y.objects[v].clone(), m))
                .collect::<Result<Vec<_>, _>>()?;
            RepMorphism::new(x.clone(), y.clone(), components)
        })
        .collect()
}

/// `dim_k Hom(x, y)` without materializing the basis morphisms.
pub fn hom_rep_dim(x: &Representation, y: &Representation) -> Result<usize, Error> {
    Ok(hom_system(x, y)?.kernel().len())
}

/// Apply a pair's special covers at every vertex and glue: produces the
/// validated `0 → B → A → x → 0` with `A(v)` covering `x(v)` and `B(v)` its
/// kernel.  Arrow maps of `A` are lifts over the covers; their existence is
/// exactly the specialness of the vertex covers, so a failed lift is
/// reported as oracle unsoundness.
pub fn vertexwise_cover(
    x: &Representation,
    pair: &CotorsionPairOracle,
) -> Result<RepSES, Error> {
    if pair.instance() != x.instance {
        return Err(Error::InstanceMismatch);
    }
    let quiver = &x.quiver;
    let covers: Vec<BaseSES> =
        (0..quiver.vertex_count()).map(|v| pair.cover(&x.objects[v])).collect::<Result<_, _>>()?;
    let mut a_maps = Vec::with_capacity(quiver.arrow_count());
    let mut b_maps = Vec::with_capacity(quiver.arrow_count());
    for (k, a) in quiver.arrows().iter().enumerate() {
        let g = x.maps[k].compose(covers[a.src].epi())?;
        let lift = solve_factorization(&g, covers[a.tgt].epi(), FactorMode::LiftOverEpi)?
            .ok_or_else(|| {
                Error::oracle(
                    "vertexwise cover",
                    format!(
                        "no lift over the cover at `{}`: its kernel is not orthogonal to the left class",
                        quiver.vertex_name(a.tgt)
                    ),
                )
            })?;
        let restricted = lift.compose(covers[a.src].mono())?;
        b_maps.push(factor_through_mono(&restricted, covers[a.tgt].mono())?);
        a_maps.push(lift);
    }
    let a_rep = Representation::new(
        quiver.clone(),
        x.instance,
        covers.iter().map(|s| s.middle().clone()).collect(),
        a_maps,
    )?;
    let b_rep = Representation::new(
        quiver.clone(),
        x.instance,
        covers.iter().map(|s| s.sub().clone()).collect(),
        b_maps,
    )?;
    let mono = RepMorphism::new(
        b_rep,
        a_rep.clone(),
        covers.iter().map(|s| s.mono().clone()).collect(),
    )?;
    let epi =
        RepMorphism::new(a_rep, x.clone(), covers.iter().map(|s| s.epi().clone()).collect())?;
    RepSES::new(mono, epi)
}

/// Dual of [`vertexwise_cover`]: glue the pair's special envelopes into the
/// validated `0 → x → Y → Z → 0`.
pub fn vertexwise_envelope(
    x: &Representation,
    pair: &CotorsionPairOracle,
) -> Result<RepSES, Error> {
    if pair.instance() != x.instance {
        return Err(Error::InstanceMismatch);
    }
    let quiver = &x.quiver;
    let envs: Vec<BaseSES> = (0..quiver.vertex_count())
        .map(|v| pair.envelope(&x.objects[v]))
        .collect::<Result<_, _>>()?;
    let mut y_maps = Vec::with_capacity(quiver.arrow_count());
    let mut z_maps = Vec::with_capacity(quiver.arrow_count());
    for (k, a) in quiver.arrows().iter().enumerate() {
        let g = envs[a.tgt].mono().compose(&x.maps[k])?;
        let extended = solve_factorization(&g, envs[a.src].mono(), FactorMode::ExtendAlongMono)?
            .ok_or_else(|| {
                Error::oracle(
                    "vertexwise envelope",
                    format!(
                        "no extension along the envelope at `{}`: its cokernel is not orthogonal to the right class",
                        quiver.vertex_name(a.src)
                    ),
                )
            })?;
        let descended = envs[a.tgt].epi().compose(&extended)?;
        z_maps.push(factor_through_epi(&descended, envs[a.src].epi())?);
        y_maps.push(extended);
    }
    let y_rep = Representation::new(
        quiver.clone(),
        x.instance,
        envs.iter().map(|s| s.middle().clone()).collect(),
        y_maps,
    )?;
    let z_rep = Representation::new(
        quiver.clone(),
        x.instance,
        envs.iter().map(|s| s.quotient().clone()).collect(),
        z_maps,
    )?;
    let mono = RepMorphism::new(
        x.clone(),
        y_rep.clone(),
        envs.iter().map(|s| s.mono().clone()).collect(),
    )?;
    let epi =
        RepMorphism::new(y_rep, z_rep, envs.iter().map(|s| s.epi().clone()).collect())?;
    RepSES::new(mono, epi)
}

/// Vertexwise kernel with its induced arrow maps and embedding.
pub fn rep_kernel(f: &RepMorphism) -> Result<(Representation, RepMorphism), Error> {
    let quiver = &f.domain.quiver;
    let pieces: Vec<(BaseObject, BaseMorphism)> =
        f.components.iter().map(base::kernel).collect();
    let mut maps = Vec::with_capacity(quiver.arrow_count());
    for (k, a) in quiver.arrows().iter().enumerate() {
        let g = f.domain.maps[k].compose(&pieces[a.src].1)?;
        maps.push(factor_through_mono(&g, &pieces[a.tgt].1)?);
    }
    let rep = Representation::new(
        quiver.clone(),
        f.domain.instance,
        pieces.iter().map(|(o, _)| o.clone()).collect(),
        maps,
    )?;
    let emb = RepMorphism::new(
        rep.clone(),
        f.domain.clone(),
        pieces.into_iter().map(|(_, e)| e).collect(),
    )?;
    Ok((rep, emb))
}

/// Vertexwise cokernel with its induced arrow maps and projection.
pub fn rep_cokernel(f: &RepMorphism) -> Result<(Representation, RepMorphism), Error> {
    let quiver = &f.codomain.quiver;
    let pieces: Vec<(BaseObject, BaseMorphism)> =
        f.components.iter().map(base::cokernel).collect();
    let mut maps = Vec::with_capacity(quiver.arrow_count());
    for (k, a) in quiver.arrows().iter().enumerate() {
        let g = pieces[a.tgt].1.compose(&f.codomain.maps[k])?;
        maps.push(factor_through_epi(&g, &pieces[a.src].1)?);
    }
    let rep = Representation::new(
        quiver.clone(),
        f.codomain.instance,
        pieces.iter().map(|(o, _)| o.clone()).collect(),
        maps,
    )?;
    let proj = RepMorphism::new(
        f.codomain.clone(),
        rep.clone(),
        pieces.into_iter().map(|(_, p)| p).collect(),
    )?;
    Ok((rep, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::oracle::pair_by_name;

    fn fv2() -> Instance {
        Instance::finvect(2).unwrap()
    }

    fn dual2() -> Instance {
        Instance::dual_numbers(2).unwrap()
    }

    fn a2() -> Arc<Quiver> {
        Arc::new(Quiver::new(vec!["1", "2"], vec![("a", "1", "2")]).unwrap())
    }

    fn demo() -> Arc<Quiver> {
        Arc::new(
            Quiver::new(
                vec!["1", "2", "3", "4"],
                vec![("a", "1", "3"), ("b", "2", "3"), ("c", "3", "4")],
            )
            .unwrap(),
        )
    }

    fn k(instance: Instance) -> BaseObject {
        BaseObject::vector_space(instance, 1)
    }

    #[test]
    fn construction_validates_shapes() {
        let q = a2();
        let objs = vec![k(fv2()), k(fv2())];
        let id = BaseMorphism::identity(&objs[0]);
        let rep =
            Representation::new(q.clone(), fv2(), objs.clone(), vec![id.clone()]).unwrap();
        assert_eq!(rep.dims(), vec![1, 1]);
        // map running the wrong way is rejected
        let wrong =
            Representation::new(q.clone(), fv2(), vec![k(fv2()), fv2().zero_object()], vec![id]);
        assert!(wrong.is_err());
        let stalk = Representation::stalk(q, 1, k(fv2()));
        assert_eq!(stalk.dims(), vec![0, 1]);
    }

    #[test]
    fn morphism_validation_checks_naturality() {
        let q = a2();
        let objs = vec![k(fv2()), k(fv2())];
        let id = BaseMorphism::identity(&objs[0]);
        let rep = Representation::new(q, fv2(), objs.clone(), vec![id]).unwrap();
        let bad = RepMorphism::new(
            rep.clone(),
            rep.clone(),
            vec![BaseMorphism::identity(&objs[0]), BaseMorphism::zero(&objs[1], &objs[1])],
        );
        assert!(matches!(bad, Err(Error::NotAMorphism(_))));
        assert!(RepMorphism::identity(&rep).is_iso());
    }

    #[test]
    fn structure_maps_follow_declaration_order() {
        let q = demo();
        // dims (1, 1, 1, 1) with identity-like maps into vertex 3
        let objs = vec![k(fv2()); 4];
        let maps = vec![
            BaseMorphism::identity(&objs[0]),
            BaseMorphism::identity(&objs[0]),
            BaseMorphism::identity(&objs[0]),
        ];
        let rep = Representation::new(q, fv2(), objs, maps).unwrap();
        let sm = rep.incoming_map(2).unwrap();
        assert_eq!(sm.arrows, vec![0, 1]);
        assert_eq!(sm.map.matrix().to_rows(), vec![vec![1, 1]]);
        assert!(!sm.map.is_mono());
        let (c, _) = rep.incoming_cokernel(2).unwrap();
        assert_eq!(c.dim(), 0);
        let out = rep.outgoing_map(2).unwrap();
        assert_eq!(out.arrows, vec![2]);
        assert!(out.map.is_epi());
    }

    #[test]
    fn f_free_places_one_copy_per_path() {
        let q = demo();
        let f = f_free(&q, 0, &k(fv2())).unwrap();
        assert_eq!(f.dims(), vec![1, 0, 1, 1]);
        assert!(f.arrow_map(0).matrix().is_identity());
        assert!(f.arrow_map(2).matrix().is_identity());
        // two parallel routes 1 → 3 give two path copies at 3 and 4
        let par = Arc::new(
            Quiver::new(vec!["1", "3", "4"], vec![("a1", "1", "3"), ("a2", "1", "3"), ("c", "3", "4")])
                .unwrap(),
        );
        let f = f_free(&par, 0, &k(fv2())).unwrap();
        assert_eq!(f.dims(), vec![1, 2, 2]);
    }

    #[test]
    fn evaluation_recovers_the_object_from_f_free() {
        for m in [k(dual2()), dual2().free_object(1)] {
            let q = demo();
            let f = f_free(&q, 2, &m).unwrap();
            assert_eq!(f.dims(), vec![0, 0, m.dim(), m.dim()]);
            let (c, proj) = f.incoming_cokernel(2).unwrap();
            assert_eq!(&c, &m);
            assert!(proj.matrix().is_identity());
            // and the structure maps at every vertex are mono
            let report = class_membership(&f, ClassSide::Phi, |_| true).unwrap();
            assert!(report.pass);
        }
    }

    #[test]
    fn evaluation_recovers_the_object_from_g_cofree() {
        for m in [k(dual2()), dual2().free_object(1)] {
            let q = demo();
            let g = g_cofree(&q, 2, &m).unwrap();
            assert_eq!(g.dims(), vec![m.dim(), m.dim(), m.dim(), 0]);
            let (kv, emb) = g.outgoing_kernel(2).unwrap();
            assert_eq!(&kv, &m);
            assert!(emb.matrix().is_identity());
            let report = class_membership(&g, ClassSide::Psi, |_| true).unwrap();
            assert!(report.pass);
        }
    }

    #[test]
    fn hom_spaces_between_stalks_and_adjoints() {
        let q = a2();
        let f = f_free(&q, 0, &k(fv2())).unwrap();
        let top = Representation::stalk(q.clone(), 1, k(fv2()));
        let bottom = Representation::stalk(q.clone(), 0, k(fv2()));
        // adjunction: Hom(f, y) ≅ Hom_base(k, y(1))
        assert_eq!(hom_rep_dim(&f, &top).unwrap(), 0);
        assert_eq!(hom_rep_dim(&top, &f).unwrap(), 1);
        assert_eq!(hom_rep_dim(&f, &bottom).unwrap(), 1);
        assert_eq!(hom_rep_dim(&bottom, &f).unwrap(), 0);
        let basis = hom_rep_basis(&f, &f).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(basis[0].component(0).matrix().is_identity());
    }

    #[test]
    fn hom_respects_the_module_structure() {
        let q = a2();
        let lam = Representation::stalk(q.clone(), 0, dual2().free_object(1));
        let kk = Representation::stalk(q.clone(), 0, k(dual2()));
        // Hom_Λ(Λ, k) = Hom_Λ(k, Λ) = k, Hom_Λ(Λ, Λ) = Λ
        assert_eq!(hom_rep_dim(&lam, &kk).unwrap(), 1);
        assert_eq!(hom_rep_dim(&kk, &lam).unwrap(), 1);
        assert_eq!(hom_rep_dim(&lam, &lam).unwrap(), 2);
    }

    #[test]
    fn vertexwise_cover_glues_special_covers() {
        let q = a2();
        let pair = pair_by_name(dual2(), "free-all").unwrap();
        let x = Representation::stalk(q, 1, k(dual2()));
        let ses = vertexwise_cover(&x, &pair).unwrap();
        assert_eq!(ses.quotient(), &x);
        assert_eq!(ses.middle().dims(), vec![0, 2]);
        assert_eq!(ses.sub().dims(), vec![0, 1]);
        assert!(ses.middle().object(1).is_free());
    }

    #[test]
    fn vertexwise_envelope_glues_special_envelopes() {
        let q = a2();
        let pair = pair_by_name(dual2(), "all-free").unwrap();
        // identity arrow map on k forces a genuine extension across the arrow
        let objs = vec![k(dual2()), k(dual2())];
        let x = Representation::new(
            q,
            dual2(),
            objs.clone(),
            vec![BaseMorphism::identity(&objs[0])],
        )
        .unwrap();
        let ses = vertexwise_envelope(&x, &pair).unwrap();
        assert_eq!(ses.sub(), &x);
        assert_eq!(ses.middle().dims(), vec![2, 2]);
        assert!(ses.middle().object(0).is_free());
        assert_eq!(ses.quotient().dims(), vec![1, 1]);
    }

    #[test]
    fn kernels_and_cokernels_of_rep_morphisms() {
        let q = a2();
        let f = f_free(&q, 0, &k(fv2())).unwrap();
        let bottom = Representation::stalk(q, 0, k(fv2()));
        let to_bottom = hom_rep_basis(&f, &bottom).unwrap().remove(0);
        let (ker, emb) = rep_kernel(&to_bottom).unwrap();
        assert_eq!(ker.dims(), vec![0, 1]);
        assert!(emb.is_mono());
        let (coker, proj) = rep_cokernel(&to_bottom).unwrap();
        assert_eq!(coker.dims(), vec![0, 0]);
        assert!(proj.is_epi());
    }

    #[test]
    fn direct_sum_of_representations() {
        let q = a2();
        let f = f_free(&q, 0, &k(fv2())).unwrap();
        let s = Representation::stalk(q.clone(), 1, k(fv2()));
        let sum = rep_direct_sum(&q, fv2(), &[f.clone(), s]).unwrap();
        assert_eq!(sum.rep.dims(), vec![1, 2]);
        for (inj, proj) in sum.injections.iter().zip(&sum.projections) {
            let round = proj.compose(inj).unwrap();
            assert!(round.is_iso());
        }
        let empty = rep_direct_sum(&q, fv2(), &[]).unwrap();
        assert!(empty.rep.is_zero());
    }
}
