//! Closed-form summaries of loops.
//!
//! A loop whose body writes neither its counter nor its limit runs its body
//! exactly `n` times, where `n` is the limit value at entry. The body is
//! executed symbolically once: fields the loop can write become variables,
//! every other field is a constant read from memory. Each written field then
//! falls into one of three shapes:
//!
//! * constant: its new value does not depend on any written field;
//! * affine: `f ← a·f + b` with constant `a ≥ 1` and `b` over constant fields;
//! * dependent: a function of constant and affine fields only.
//!
//! These three shapes have closed forms after `n` iterations, and so does
//! the step count when it is linear in the non-dependent fields. Anything
//! else is left to plain iteration.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{rat, to_nat, Poly};
use super::Layout;
use crate::numerals::Nat;
use crate::syntax::{ItemId, ProgramItem, ProgramTree};

#[derive(Debug, Clone)]
pub(crate) enum Op {
    Succ(u32),
    Empty,
    Loop(usize),
}

#[derive(Debug, Clone)]
pub(crate) struct LoopInfo {
    pub counter: u32,
    pub limit: u32,
    pub body: Vec<usize>,
    /// Fields one iteration can write, including the counter.
    pub writes: BTreeSet<u32>,
    /// Fields the body reads but never writes.
    pub invariants: Vec<u32>,
    /// The body leaves counter and limit alone.
    pub summarizable: bool,
    pub single: bool,
}

/// Slot-addressed form of a program tree.
#[derive(Debug, Clone)]
pub(crate) struct Code {
    pub ops: Vec<Op>,
    pub loops: Vec<LoopInfo>,
    pub top: Vec<usize>,
}

impl Code {
    /// Returns `None` when accolades nest deeper than `max_nesting`.
    pub fn build(tree: &ProgramTree, layout: &Layout, max_nesting: usize) -> Option<Code> {
        let mut too_deep = false;
        tree.walk(|_, nesting| too_deep |= nesting > max_nesting);
        if too_deep {
            return None;
        }
        let n = tree.node_count();
        let mut ops = Vec::with_capacity(n);
        let mut loops = Vec::new();
        // Per node: written fields and mentioned fields of its subtree.
        let mut writes: Vec<BTreeSet<u32>> = Vec::with_capacity(n);
        let mut mentions: Vec<BTreeSet<u32>> = Vec::with_capacity(n);
        let slot = |f| layout.slot(f).expect("named field");
        for i in 0..n {
            match tree.item(ItemId(i)) {
                ProgramItem::Succeed(f) => {
                    let s = slot(f);
                    ops.push(Op::Succ(s));
                    writes.push([s].into());
                    mentions.push([s].into());
                }
                ProgramItem::Empty => {
                    ops.push(Op::Empty);
                    writes.push(BTreeSet::new());
                    mentions.push(BTreeSet::new());
                }
                ProgramItem::Accolade { counter, body, limit, single } => {
                    let (c, l) = (slot(counter), slot(limit));
                    let mut body_writes = BTreeSet::new();
                    let mut body_mentions = BTreeSet::new();
                    for child in body {
                        debug_assert!(child.0 < i, "children precede parents in the arena");
                        body_writes.extend(writes[child.0].iter().copied());
                        body_mentions.extend(mentions[child.0].iter().copied());
                    }
                    let summarizable = !*single && !body_writes.contains(&c) && !body_writes.contains(&l);
                    let mut w = body_writes.clone();
                    w.insert(c);
                    let invariants = body_mentions.difference(&w).copied().collect();
                    let all_w = w.clone();
                    let mut all_m = body_mentions;
                    all_m.insert(c);
                    all_m.insert(l);
                    loops.push(LoopInfo {
                        counter: c,
                        limit: l,
                        body: body.iter().map(|b| b.0).collect(),
                        writes: w,
                        invariants,
                        summarizable,
                        single: *single,
                    });
                    ops.push(Op::Loop(loops.len() - 1));
                    writes.push(all_w);
                    mentions.push(all_m);
                }
            }
        }
        let top = tree.top().iter().map(|t| t.0).collect();
        Some(Code { ops, loops, top })
    }
}

/// Symbolic effect of a code fragment: new values of written fields and the
/// steps taken, as polynomials over the values at the fragment's start.
#[derive(Debug, Clone, Default)]
pub(crate) struct Effect {
    pub writes: BTreeMap<u32, Poly>,
    pub steps: Poly,
}

#[derive(Debug, Clone)]
pub(crate) enum Form {
    Const { e: Poly },
    /// `f₁ = a·f₀ + b0`, then `f_{j+1} = a·f_j + bc`.
    Affine { a: BigUint, b0: Poly, bc: Poly },
    /// `f_j = p(state_{j−1})`.
    Dependent { p: Poly },
}

/// Classified iteration of one loop, plus its per-iteration step count
/// written as `alpha + Σ betas[g]·g`.
#[derive(Debug, Clone)]
pub(crate) struct Forms {
    pub fields: BTreeMap<u32, Form>,
    pub alpha: Poly,
    pub betas: BTreeMap<u32, Poly>,
}

pub(crate) struct SymCtx<'a> {
    pub code: &'a Code,
    pub mem: &'a [Nat],
    /// Fields treated as variables; all others read from `mem`.
    pub vars: &'a BTreeSet<u32>,
    pub max_value_bits: u64,
}

impl SymCtx<'_> {
    fn read(&self, st: &Effect, s: u32) -> Poly {
        match st.writes.get(&s) {
            Some(p) => p.clone(),
            None if self.vars.contains(&s) => Poly::var(s),
            None => Poly::nat(&self.mem[s as usize]),
        }
    }

    fn exec(&self, ops: &[usize], st: &mut Effect) -> Option<()> {
        for &op in ops {
            match &self.code.ops[op] {
                Op::Empty => {}
                Op::Succ(f) => {
                    let v = self.read(st, *f).add(&Poly::int(1))?;
                    st.writes.insert(*f, v);
                    st.steps = st.steps.add(&Poly::int(1))?;
                }
                Op::Loop(li) => {
                    let info = &self.code.loops[*li];
                    st.steps = st.steps.add(&Poly::int(1))?;
                    if info.single {
                        st.writes.insert(info.counter, Poly::zero());
                        continue;
                    }
                    if !info.summarizable {
                        return None;
                    }
                    st.writes.insert(info.counter, Poly::zero());
                    // The effect below is over the inner loop's start, so a
                    // symbolic count must be too.
                    let count = self.read(st, info.limit);
                    let count = if count.as_constant().is_some() { count } else { Poly::var(info.limit) };
                    let iter = self.iteration(info)?;
                    let forms = classify(&iter, &info.writes)?;
                    let effect = closed_form(&forms, &info.writes, &count, self.max_value_bits)?;
                    let current = |s: u32| st.writes.get(&s).cloned();
                    let mut updates = Vec::with_capacity(effect.writes.len());
                    for (f, p) in &effect.writes {
                        updates.push((*f, p.substitute(&current)?));
                    }
                    let steps = effect.steps.substitute(&current)?;
                    for (f, p) in updates {
                        st.writes.insert(f, p);
                    }
                    st.steps = st.steps.add(&steps)?;
                }
            }
        }
        Some(())
    }

    /// One iteration: the counter increment followed by the body.
    pub fn iteration(&self, info: &LoopInfo) -> Option<Effect> {
        let mut st = Effect::default();
        st.writes.insert(info.counter, Poly::var(info.counter).add(&Poly::int(1))?);
        st.steps = Poly::int(1);
        self.exec(&info.body, &mut st)?;
        Some(st)
    }
}

/// Sorts the written fields of one iteration into constant, affine and
/// dependent shapes, and linearizes the step count.
pub(crate) fn classify(iter: &Effect, w: &BTreeSet<u32>) -> Option<Forms> {
    // A field written only inside an inner loop that runs zero times keeps its value.
    let after: BTreeMap<u32, Poly> =
        w.iter().map(|&f| (f, iter.writes.get(&f).cloned().unwrap_or_else(|| Poly::var(f)))).collect();
    let mut fields = BTreeMap::new();
    let mut consts = BTreeSet::new();
    for &f in w {
        let p = &after[&f];
        if !p.mentions_any(w) {
            consts.insert(f);
            fields.insert(f, Form::Const { e: p.clone() });
        }
    }
    let const_value = |g: u32| match fields.get(&g) {
        Some(Form::Const { e }) => Some(e.clone()),
        _ => None,
    };
    let mut affine = BTreeMap::new();
    for &f in w {
        if consts.contains(&f) {
            continue;
        }
        let p = &after[&f];
        let (a, b) = p.linear_in(f)?;
        if a.is_zero() {
            continue;
        }
        let a = to_nat(&a.as_constant()?)?;
        if a.is_zero() || !b.vars().iter().all(|g| !w.contains(g) || consts.contains(g)) {
            return None;
        }
        let bc = b.substitute(&|g| if consts.contains(&g) { const_value(g) } else { None })?;
        affine.insert(f, Form::Affine { a, b0: b, bc });
    }
    let mut dependent = BTreeMap::new();
    for &f in w {
        if consts.contains(&f) || affine.contains_key(&f) {
            continue;
        }
        let p = &after[&f];
        if p.vars().iter().any(|g| w.contains(g) && !consts.contains(g) && !affine.contains_key(g)) {
            return None;
        }
        dependent.insert(f, Form::Dependent { p: p.clone() });
    }
    fields.extend(affine);
    fields.extend(dependent);
    let (alpha, betas) = iter.steps.linear_over(w)?;
    if betas.keys().any(|g| matches!(fields[g], Form::Dependent { .. })) {
        return None;
    }
    Some(Forms { fields, alpha, betas })
}

/// `a^e` when the result is known to stay within `max_bits`.
fn bounded_pow(a: &BigUint, e: &BigUint, max_bits: u64) -> Option<BigUint> {
    let e64: u64 = e.try_into().ok()?;
    let per = a.bits().saturating_sub(1);
    if per > 0 && e64.checked_mul(per)? > max_bits {
        return None;
    }
    Some(num_traits::pow(a.clone(), usize::try_from(e64).ok()?))
}

/// Symbolic value of every written field after `count` iterations, and the
/// total step count, over the loop-start state.
pub(crate) fn closed_form(forms: &Forms, w: &BTreeSet<u32>, count: &Poly, max_bits: u64) -> Option<Effect> {
    match count.as_constant() {
        Some(k) => {
            let k = to_nat(&k)?;
            if k.is_zero() {
                return Some(Effect::default());
            }
            closed_form_const(forms, w, &k, max_bits)
        }
        None => closed_form_symbolic(forms, count),
    }
}

fn closed_form_symbolic(forms: &Forms, m: &Poly) -> Option<Effect> {
    let mut writes = BTreeMap::new();
    let mut b_of = BTreeMap::new();
    for (&f, form) in &forms.fields {
        let Form::Affine { a, b0, bc } = form else { return None };
        if !a.is_one() || b0 != bc || !b0.vars().is_disjoint(&forms.fields.keys().copied().collect()) {
            return None;
        }
        writes.insert(f, Poly::var(f).add(&m.mul(b0)?)?);
        b_of.insert(f, b0.clone());
    }
    // Σ_{j<m} (α + Σ β_g·(g + j·b_g)) = m·α + Σ β_g·(m·g + b_g·m(m−1)/2)
    let tri = m.mul(&m.sub(&Poly::int(1))?)?.scale(&BigRational::new(1.into(), 2.into()));
    let mut steps = m.mul(&forms.alpha)?;
    for (g, beta) in &forms.betas {
        let sum = m.mul(&Poly::var(*g))?.add(&b_of[g].mul(&tri)?)?;
        steps = steps.add(&beta.mul(&sum)?)?;
    }
    Some(Effect { writes, steps })
}

fn closed_form_const(forms: &Forms, w: &BTreeSet<u32>, k: &BigUint, max_bits: u64) -> Option<Effect> {
    let one = BigUint::one();
    let km1 = k - &one;
    let value_at = |f: u32, j: &BigUint| -> Option<Poly> {
        if j.is_zero() {
            return Some(Poly::var(f));
        }
        let jm1 = j - &one;
        match &forms.fields[&f] {
            Form::Const { e } => Some(e.clone()),
            Form::Affine { a, b0, bc } => {
                let f1 = Poly::var(f).scale(&rat(a)).add(b0)?;
                if a.is_one() {
                    f1.add(&bc.scale(&rat(&jm1)))
                } else {
                    let ap = bounded_pow(a, &jm1, max_bits)?;
                    let geo = (&ap - &one) / (a - &one);
                    f1.scale(&rat(&ap)).add(&bc.scale(&rat(&geo)))
                }
            }
            Form::Dependent { .. } => None,
        }
    };
    let mut writes = BTreeMap::new();
    for (&f, form) in &forms.fields {
        let v = match form {
            Form::Dependent { p } => {
                if km1.is_zero() {
                    p.clone()
                } else {
                    let mut prev = BTreeMap::new();
                    for g in p.vars() {
                        if w.contains(&g) {
                            prev.insert(g, value_at(g, &km1)?);
                        }
                    }
                    p.substitute(&|g| prev.get(&g).cloned())?
                }
            }
            _ => value_at(f, k)?,
        };
        writes.insert(f, v);
    }
    let mut steps = forms.alpha.scale(&rat(k));
    for (&g, beta) in &forms.betas {
        let sum = match &forms.fields[&g] {
            Form::Const { e } => Poly::var(g).add(&e.scale(&rat(&km1)))?,
            Form::Affine { a, b0, bc } => {
                let f1 = Poly::var(g).scale(&rat(a)).add(b0)?;
                if a.is_one() {
                    let tri = if km1.is_zero() { BigUint::zero() } else { &km1 * (&km1 - &one) / 2u32 };
                    Poly::var(g)
                        .scale(&rat(k))
                        .add(&b0.scale(&rat(&km1)))?
                        .add(&bc.scale(&rat(&tri)))?
                } else {
                    let ap = bounded_pow(a, &km1, max_bits)?;
                    let geo = (&ap - &one) / (a - &one);
                    let inner = (&geo - &km1) / (a - &one);
                    Poly::var(g).add(&f1.scale(&rat(&geo)))?.add(&bc.scale(&rat(&inner)))?
                }
            }
            Form::Dependent { .. } => return None,
        };
        steps = steps.add(&beta.mul(&sum)?)?;
    }
    Some(Effect { writes, steps })
}
