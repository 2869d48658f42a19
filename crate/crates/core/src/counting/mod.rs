//! Exact counts of forward switchings, inverse configurations and gadget
//! completions, plus uniform selection among valid moves.
//!
//! Two engines share one set of enumeration plans. The naive engine counts the
//! final edge of each pattern by inclusion-exclusion; the cached engine also
//! collapses the final pair of edges using [`StructureCache`] aggregates.

pub mod cache;
pub mod engine;
pub mod plan;

use serde::{Deserialize, Serialize};

pub use cache::StructureCache;
use engine::{red_degrees, Assign, Scratch, View, Walker};
use plan::{plan_set, PlanId, MAX_K};

use crate::error::{Error, Result};
use crate::graph_core::{ColoredState, HostInstance, Pair, Vertex};
use crate::rng::RngStream;
use crate::switchings::{
    b1_octagon_variant, resolve_move, to_plus_frame, B1Variant, Sign, SwitchClass, SwitchMove, SwitchType,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum EngineKind {
    #[default]
    Naive,
    Cached,
}

fn sidx(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

/// Counting front end. The cached engine owns a [`StructureCache`] that must
/// follow the graph, so edits go through [`Counter::apply_toggles`].
#[derive(Debug, Clone)]
pub struct Counter {
    kind: EngineKind,
    cache: Option<StructureCache>,
    scratch: Scratch,
}

impl Counter {
    pub fn new(kind: EngineKind, host: &HostInstance, g: &ColoredState) -> Counter {
        let cache = match kind {
            EngineKind::Naive => None,
            EngineKind::Cached => Some(StructureCache::build(host, g)),
        };
        Counter { kind, cache, scratch: Scratch::new(g.n()) }
    }

    pub fn naive(g: &ColoredState) -> Counter {
        Counter { kind: EngineKind::Naive, cache: None, scratch: Scratch::new(g.n()) }
    }

    pub fn kind(&self) -> EngineKind {
        self.kind
    }

    pub fn cache(&self) -> Option<&StructureCache> {
        self.cache.as_ref()
    }

    /// Rebuilds engine state for a fresh graph (after a restart).
    pub fn reset(&mut self, host: &HostInstance, g: &ColoredState) {
        if self.kind == EngineKind::Cached {
            self.cache = Some(StructureCache::build(host, g));
        }
        if self.scratch.m[0].list.capacity() == 0 && g.n() != 0 {
            self.scratch = Scratch::new(g.n());
        }
    }

    /// Toggles edges of `g` from a switching, keeping the cache in step.
    pub fn apply_toggles(&mut self, host: &HostInstance, g: &mut ColoredState, remove: &[Pair], add: &[Pair]) -> Result<()> {
        match &mut self.cache {
            Some(c) => c.toggle(host, g, remove, add, true),
            None => g.apply_switch_toggles(host, remove, add),
        }
    }

    fn with_walkers<R>(
        &mut self,
        host: &HostInstance,
        g: &ColoredState,
        id: PlanId,
        sign: Sign,
        f: impl FnOnce(&Walker<'_>, &Walker<'_>, &mut Scratch) -> R,
    ) -> R {
        let set = plan_set(id);
        let owned;
        let red_deg: &[u32] = match &self.cache {
            Some(c) => &c.red_deg,
            None => {
                owned = red_degrees(host, g);
                &owned
            }
        };
        let s = sidx(sign);
        let naive = Walker { view: View { host, g, red_deg }, plan: &set.naive[s], cache: None };
        let main = match &self.cache {
            Some(c) => Walker { view: View { host, g, red_deg }, plan: &set.cached[s], cache: Some(c) },
            None => Walker { view: View { host, g, red_deg }, plan: &set.naive[s], cache: None },
        };
        f(&main, &naive, &mut self.scratch)
    }

    fn assign_fixed(id: PlanId, sign: Sign, fixed: &[Vertex]) -> Assign {
        let mut a: Assign = [0; MAX_K];
        let plan = &plan_set(id).naive[sidx(sign)];
        for (&pos, &v) in plan.fixed.iter().zip(fixed) {
            a[pos] = v;
        }
        a
    }

    fn count(&mut self, host: &HostInstance, g: &ColoredState, id: PlanId, sign: Sign, fixed: &[Vertex]) -> u128 {
        let mut a = Self::assign_fixed(id, sign, fixed);
        self.with_walkers(host, g, id, sign, |w, _, s| w.count(&mut a, s))
    }

    fn pick(
        &mut self,
        host: &HostInstance,
        g: &ColoredState,
        id: PlanId,
        sign: Sign,
        total: u128,
        r: u128,
    ) -> Option<Vec<Vertex>> {
        let mut a = Self::assign_fixed(id, sign, &[]);
        debug_assert!(r < total);
        self.with_walkers(host, g, id, sign, |w, naive, s| w.select(naive, r, &mut a, s))
    }

    /// All tuples of a plan (naive walk), octagon fixed for gadget plans.
    fn enumerate(&mut self, host: &HostInstance, g: &ColoredState, id: PlanId, sign: Sign, fixed: &[Vertex]) -> Vec<Vec<Vertex>> {
        let mut a = Self::assign_fixed(id, sign, fixed);
        let mut out = Vec::new();
        self.with_walkers(host, g, id, sign, |_, naive, s| {
            naive.enumerate(&mut a, s, &mut |t| out.push(t.to_vec()));
        });
        out
    }

    pub fn f_easy(&mut self, host: &HostInstance, g: &ColoredState) -> u128 {
        self.count(host, g, PlanId::EasyFwd, Sign::Plus, &[])
    }

    pub fn b_easy(&mut self, host: &HostInstance, g: &ColoredState) -> u128 {
        self.count(host, g, PlanId::EasyInv, Sign::Plus, &[])
    }

    fn type_ids(ty: SwitchType) -> (Vec<PlanId>, Sign) {
        match ty {
            SwitchType::I => ((0..4).map(PlanId::TypeI).collect(), Sign::Plus),
            SwitchType::IIa(s) => (vec![PlanId::IIa], s),
            SwitchType::IIb(s) => (vec![PlanId::IIb], s),
            SwitchType::IIc(s) => (vec![PlanId::IIc], s),
            SwitchType::III(s) => (vec![PlanId::III], s),
        }
    }

    /// Number of valid forward moves of type `ty` in `g`.
    pub fn f_type(&mut self, host: &HostInstance, g: &ColoredState, ty: SwitchType) -> u128 {
        let (ids, s) = Self::type_ids(ty);
        ids.into_iter().map(|id| self.count(host, g, id, s, &[])).sum()
    }

    /// Number of inverse configurations of class `alpha` in `g`.
    pub fn b_class(&mut self, host: &HostInstance, g: &ColoredState, alpha: SwitchClass) -> u128 {
        match alpha {
            SwitchClass::A => self.count(host, g, PlanId::InvA, Sign::Plus, &[]),
            SwitchClass::B1(s) => (0..4).map(|v| self.count(host, g, PlanId::B1(v), s, &[])).sum(),
            SwitchClass::B2(s) => self.count(host, g, PlanId::InvB2, s, &[]),
            SwitchClass::C(s) => self.count(host, g, PlanId::InvC, s, &[]) + self.count(host, g, PlanId::III, s, &[]),
        }
    }

    /// B1 octagons of one variant.
    pub fn b1_variant_count(&mut self, host: &HostInstance, g: &ColoredState, s: Sign, v: B1Variant) -> u128 {
        self.count(host, g, PlanId::B1(v.index()), s, &[])
    }

    /// All B1 octagons of one orientation, with their variants (tuples in their own frame).
    pub fn b1_octagons(&mut self, host: &HostInstance, g: &ColoredState, s: Sign) -> Vec<(Vec<Vertex>, B1Variant)> {
        let mut out = Vec::new();
        for v in B1Variant::ALL {
            for t in self.enumerate(host, g, PlanId::B1(v.index()), s, &[]) {
                out.push((t, v));
            }
        }
        out
    }

    /// Gadget completions in the result graph for a B1 octagon `w` (own frame).
    pub fn bhat(&mut self, host: &HostInstance, g: &ColoredState, w: &[Vertex], ty: SwitchType) -> Result<u128> {
        let (want, id) = match ty {
            SwitchType::IIb(_) => (B1Variant::IIb, PlanId::BhatIIb),
            SwitchType::IIc(_) => (B1Variant::IIc, PlanId::BhatIIc),
            _ => return Err(Error::WrongVariant),
        };
        if b1_octagon_variant(host, g, w, ty.sign()) != Some(want) {
            return Err(Error::WrongVariant);
        }
        let u = if ty.sign() == Sign::Plus { w.to_vec() } else { to_plus_frame(w) };
        Ok(self.count(host, g, id, Sign::Plus, &u))
    }

    /// Gadget completions in the source graph for a IIb/IIc context `w` (own frame).
    pub fn gadget_completions(&mut self, host: &HostInstance, g: &ColoredState, w: &[Vertex], ty: SwitchType) -> u128 {
        let id = match ty {
            SwitchType::IIb(_) => PlanId::GadgetsIIb,
            SwitchType::IIc(_) => PlanId::GadgetsIIc,
            _ => return 0,
        };
        let u = if ty.sign() == Sign::Plus { w[..8].to_vec() } else { to_plus_frame(&w[..8]) };
        self.count(host, g, id, Sign::Plus, &u)
    }

    /// Every valid forward move of type `ty`, in walk order.
    pub fn enumerate_moves(&mut self, host: &HostInstance, g: &ColoredState, ty: SwitchType) -> Vec<SwitchMove> {
        let (ids, s) = Self::type_ids(ty);
        let mut out = Vec::new();
        for id in ids {
            for t in self.enumerate(host, g, id, s, &[]) {
                out.push(resolve_move(host, g, ty, &t).expect("plan tuples are valid moves"));
            }
        }
        out
    }

    /// Every valid 3-edge switching tuple.
    pub fn enumerate_easy(&mut self, host: &HostInstance, g: &ColoredState) -> Vec<Vec<Vertex>> {
        self.enumerate(host, g, PlanId::EasyFwd, Sign::Plus, &[])
    }

    /// A uniformly random valid move of type `ty`, given `f = f_type(ty)`.
    pub fn pick_uniform_move_with_total(
        &mut self,
        host: &HostInstance,
        g: &ColoredState,
        ty: SwitchType,
        f: u128,
        rng: &mut RngStream,
    ) -> Result<SwitchMove> {
        if f == 0 {
            return Err(Error::NoValidMove);
        }
        let mut r = rng.below(f);
        let (ids, s) = Self::type_ids(ty);
        for id in ids {
            let c = if ty == SwitchType::I { self.count(host, g, id, s, &[]) } else { f };
            if r < c {
                let t = self.pick(host, g, id, s, c, r).ok_or(Error::NoValidMove)?;
                return resolve_move(host, g, ty, &t).ok_or(Error::InvalidMove);
            }
            r -= c;
        }
        Err(Error::NoValidMove)
    }

    pub fn pick_uniform_move(&mut self, host: &HostInstance, g: &ColoredState, ty: SwitchType, rng: &mut RngStream) -> Result<SwitchMove> {
        let f = self.f_type(host, g, ty);
        self.pick_uniform_move_with_total(host, g, ty, f, rng)
    }
}

/// Naive-engine shorthands.
pub fn f_easy(host: &HostInstance, g: &ColoredState) -> u128 {
    Counter::naive(g).f_easy(host, g)
}
pub fn b_easy(host: &HostInstance, g: &ColoredState) -> u128 {
    Counter::naive(g).b_easy(host, g)
}
pub fn f_type(host: &HostInstance, g: &ColoredState, ty: SwitchType) -> u128 {
    Counter::naive(g).f_type(host, g, ty)
}
pub fn b_class(host: &HostInstance, g: &ColoredState, alpha: SwitchClass) -> u128 {
    Counter::naive(g).b_class(host, g, alpha)
}
pub fn bhat(host: &HostInstance, g: &ColoredState, w: &[Vertex], ty: SwitchType) -> Result<u128> {
    Counter::naive(g).bhat(host, g, w, ty)
}
pub fn pick_uniform_move(host: &HostInstance, g: &ColoredState, ty: SwitchType, rng: &mut RngStream) -> Result<SwitchMove> {
    Counter::naive(g).pick_uniform_move(host, g, ty, rng)
}
