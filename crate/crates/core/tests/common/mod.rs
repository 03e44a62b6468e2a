//! Seeded random generators for signatures, terms, formulas and theories.
#![allow(dead_code)]

use std::sync::Arc;

use phl_core::syntax::{Axiom, Context, Formula, FunctionSymbol, RelationSymbol, Sequent, Signature, Term, Theory};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Gen {
    pub rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A signature with up to three sorts and a few symbols of arity at most two.
    pub fn signature(&mut self) -> Signature {
        let mut sig = Signature::new();
        let nsorts = self.rng.gen_range(1..=3);
        let sorts: Vec<String> = (0..nsorts).map(|i| format!("s{i}")).collect();
        for s in &sorts {
            sig.add_sort(s.clone());
        }
        for i in 0..self.rng.gen_range(0..=4) {
            let arity = self.rng.gen_range(0..=2);
            sig.add_function(FunctionSymbol {
                name: format!("f{i}"),
                args: (0..arity).map(|_| sorts.choose(&mut self.rng).unwrap().clone()).collect(),
                result: sorts.choose(&mut self.rng).unwrap().clone(),
            });
        }
        for i in 0..self.rng.gen_range(0..=3) {
            let arity = self.rng.gen_range(0..=2);
            sig.add_relation(RelationSymbol {
                name: format!("R{i}"),
                args: (0..arity).map(|_| sorts.choose(&mut self.rng).unwrap().clone()).collect(),
            });
        }
        sig
    }

    /// A context with at least one variable of every sort.
    pub fn context(&mut self, sig: &Signature, extra: usize) -> Context {
        let mut ctx = Context::new();
        let sorts: Vec<String> = sig.sorts().map(str::to_owned).collect();
        for s in &sorts {
            ctx.push(format!("v{}", ctx.len()), s.clone());
        }
        for _ in 0..self.rng.gen_range(0..=extra) {
            let s = sorts.choose(&mut self.rng).unwrap().clone();
            ctx.push(format!("v{}", ctx.len()), s);
        }
        ctx
    }

    /// A term of the given sort, of depth at most `depth`.
    pub fn term(&mut self, sig: &Signature, ctx: &Context, sort: &str, depth: usize) -> Term {
        let funcs: Vec<&FunctionSymbol> = sig
            .functions()
            .filter(|f| f.result == sort && (depth > 0 || f.args.is_empty()))
            .collect();
        let vars: Vec<&str> = ctx.vars.iter().filter(|(_, s)| s == sort).map(|(v, _)| v.as_str()).collect();
        if !funcs.is_empty() && (vars.is_empty() || self.rng.gen_bool(0.5)) {
            let f = funcs.choose(&mut self.rng).unwrap();
            let args = f.args.clone();
            let name = f.name.clone();
            let args = args.iter().map(|s| self.term(sig, ctx, s, depth.saturating_sub(1))).collect();
            return Term::app(name, args);
        }
        Term::var(*vars.choose(&mut self.rng).expect("every sort has a variable"))
    }

    pub fn atom(&mut self, sig: &Signature, ctx: &Context, depth: usize) -> Formula {
        let rels: Vec<RelationSymbol> = sig.relations().cloned().collect();
        match self.rng.gen_range(0..4) {
            0 if !rels.is_empty() => {
                let r = rels.choose(&mut self.rng).unwrap();
                let args = r.args.iter().map(|s| self.term(sig, ctx, s, depth)).collect();
                Formula::rel(r.name.clone(), args)
            }
            1 => Formula::Truth,
            _ => {
                let sort = ctx.vars.choose(&mut self.rng).unwrap().1.clone();
                let l = self.term(sig, ctx, &sort, depth);
                let r = if self.rng.gen_bool(0.3) {
                    l.clone()
                } else {
                    self.term(sig, ctx, &sort, depth)
                };
                Formula::eq(l, r)
            }
        }
    }

    /// A formula with at most one level of nested conjunction.
    pub fn formula(&mut self, sig: &Signature, ctx: &Context, depth: usize) -> Formula {
        if self.rng.gen_bool(0.4) {
            return self.atom(sig, ctx, depth);
        }
        let n = self.rng.gen_range(1..=3);
        let parts = (0..n)
            .map(|_| {
                if self.rng.gen_bool(0.2) {
                    Formula::Conj(vec![self.atom(sig, ctx, depth), self.atom(sig, ctx, depth)])
                } else {
                    self.atom(sig, ctx, depth)
                }
            })
            .collect();
        Formula::Conj(parts)
    }

    pub fn sequent(&mut self, sig: &Signature, extra: usize, depth: usize) -> Sequent {
        let ctx = self.context(sig, extra);
        let premise = self.formula(sig, &ctx, depth);
        let conclusion = self.formula(sig, &ctx, depth);
        Sequent::new(ctx, premise, conclusion)
    }

    pub fn theory(&mut self) -> Theory {
        let sig = self.signature();
        let axioms = (0..self.rng.gen_range(0..=3))
            .map(|i| Axiom {
                name: format!("ax{i}"),
                sequent: self.sequent(&sig, 2, 2),
            })
            .collect();
        Theory {
            name: "random".into(),
            signature: Arc::new(sig),
            axioms,
        }
    }
}
