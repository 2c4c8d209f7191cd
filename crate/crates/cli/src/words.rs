//! Parsing elements written as words in named generators, e.g. `t s t^-1`
//! or `sigma0`. Tokens are separated by spaces or `*`; `x^k` is a power and
//! a capitalized name stands for the inverse when it is not itself a name.

use lampwalk::constructions::kernel_generator;
use lampwalk::group::{Cyclic, DeltaGroup, FiniteGroupTable, Group, Integers, SymZ, Wreath};
use lampwalk::harmonic::DaGroup;

use crate::error::CliError;

pub trait Named: Group {
    fn token(&self, name: &str) -> Option<Self::Elem>;
    fn vocabulary(&self) -> String;
}

pub fn parse_word<G: Named>(g: &G, text: &str) -> Result<G::Elem, CliError> {
    let bad = |t: &str| CliError::Config(format!("cannot parse `{t}` (names: {})", g.vocabulary()));
    let mut acc = g.identity();
    for tok in text.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        let (name, power) = match tok.split_once('^') {
            Some((n, p)) => (n, p.parse::<i64>().map_err(|_| bad(tok))?),
            None => (tok, 1),
        };
        let x = if matches!(name, "e" | "id") {
            g.identity()
        } else if let Some(x) = g.token(name) {
            x
        } else {
            let lower = name.to_lowercase();
            let y = g.token(&lower).filter(|_| lower != name).ok_or_else(|| bad(tok))?;
            g.inv(&y)
        };
        acc = g.mul(&acc, &g.pow(&x, power));
    }
    Ok(acc)
}

/// A fixed nontrivial lamp value.
pub trait LampGen: Group {
    fn lamp_gen(&self) -> Self::Elem;
}

impl LampGen for Cyclic {
    fn lamp_gen(&self) -> i64 {
        1
    }
}

impl LampGen for Integers {
    fn lamp_gen(&self) -> i64 {
        1
    }
}

impl LampGen for FiniteGroupTable {
    fn lamp_gen(&self) -> u32 {
        self.elements().find(|&x| x != self.id()).unwrap_or(self.id())
    }
}

fn site(name: &str, prefix: &str) -> Option<i64> {
    name.strip_prefix(prefix)?.strip_prefix('@')?.parse().ok()
}

impl<L: LampGen> Named for Wreath<L, Integers> {
    fn token(&self, name: &str) -> Option<Self::Elem> {
        match name {
            "t" => Some(self.t()),
            "s" | "sigma0" => Some(self.lamp_at(0, self.lamp.lamp_gen())),
            _ => site(name, "s").map(|x| self.lamp_at(x, self.lamp.lamp_gen())),
        }
    }

    fn vocabulary(&self) -> String {
        "t, s (= sigma0), s@k".into()
    }
}

impl Named for SymZ {
    fn token(&self, name: &str) -> Option<Self::Elem> {
        match name {
            "t" => Some(self.shift()),
            "s" => Some(self.transposition()),
            _ => {
                let inner = name.strip_prefix('(')?.strip_suffix(')')?;
                let (a, b) = inner.split_once(',')?;
                Some(self.swap(a.trim().parse().ok()?, b.trim().parse().ok()?))
            }
        }
    }

    fn vocabulary(&self) -> String {
        "t, s, (a,b)".into()
    }
}

impl Named for Integers {
    fn token(&self, name: &str) -> Option<i64> {
        (name == "t").then_some(1)
    }

    fn vocabulary(&self) -> String {
        "t".into()
    }
}

impl Named for DaGroup {
    fn token(&self, name: &str) -> Option<Self::Elem> {
        match name {
            "t" => Some(self.t(1)),
            "f" => Some(self.letter(self.f.lamp_gen())),
            _ => {
                let i: u32 = name.strip_prefix('f')?.parse().ok()?;
                ((i as usize) < self.f.order_of_group()).then(|| self.letter(i))
            }
        }
    }

    fn vocabulary(&self) -> String {
        format!("t, f, f0..f{}", self.f.order_of_group() - 1)
    }
}

impl<L: Group + Clone> Named for DeltaGroup<L> {
    fn token(&self, name: &str) -> Option<Self::Elem> {
        if name == "gamma" {
            return Some(self.single_site(0, 0, kernel_generator(self.lamp(0))));
        }
        self.generators().into_iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    fn vocabulary(&self) -> String {
        let mut names: Vec<String> = self.generators().into_iter().map(|(n, _)| n).collect();
        names.push("gamma".into());
        names.join(", ")
    }
}
