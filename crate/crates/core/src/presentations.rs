//! Enumeration and semantic verification of the relation families satisfied
//! by the Whitehead and transvection generators of `Aut(F_n)` and of the
//! subgroups fixing a prefix of the basis.
//!
//! Each relation family is instantiated over its declared letter/set ranges
//! in a fixed canonical order, and every instance is checked *semantically*:
//! both sides are realized as automorphisms through [`crate::autos`] and
//! compared as maps. The families:
//!
//! * `R1`..`R7` — the Whitehead-generator relators of `Aut(F_n)`; `R8`..`R10`
//!   are enumerated as checked consequences, not presentation members.
//! * `S0`..`S5` — the transvection presentations of the prefix stabilizer
//!   (with the permutation part ranging over `Omega ∩ Aut` or
//!   `Omega ∩ SAut` depending on the theorem).
//! * `W1`..`W3` — the swap relations over the unfixed letters.
//! * `T1`..`T6` and `T5'` — the transvection/swap presentations of the
//!   special prefix stabilizer (`T5'` is the swap-conjugation form, `T5` the
//!   sign-flip form that replaces it when the unfixed rank is at least 3).

use crate::autos::{
    enumerate_lambda, enumerate_omega, realize_word, Automorphism, LetterSet, NamedGenerator,
    SignedPerm, WhiteheadAuto,
};
use crate::error::{Error, Result};
use crate::freegroup::Letter;
use serde::Serialize;
use std::fmt::Write as _;

// ---------------------------------------------------------------------------
// Families and theorems
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    S0,
    S1,
    S2,
    S3,
    S4,
    S5,
    W1,
    W2,
    W3,
    T1,
    T2,
    T3,
    T4,
    T5,
    T5Prime,
    T6,
}

impl Family {
    pub fn tag(self) -> &'static str {
        use Family::*;
        match self {
            R1 => "R1",
            R2 => "R2",
            R3 => "R3",
            R4 => "R4",
            R5 => "R5",
            R6 => "R6",
            R7 => "R7",
            R8 => "R8",
            R9 => "R9",
            R10 => "R10",
            S0 => "S0",
            S1 => "S1",
            S2 => "S2",
            S3 => "S3",
            S4 => "S4",
            S5 => "S5",
            W1 => "W1",
            W2 => "W2",
            W3 => "W3",
            T1 => "T1",
            T2 => "T2",
            T3 => "T3",
            T4 => "T4",
            T5 => "T5",
            T5Prime => "T5'",
            T6 => "T6",
        }
    }

    /// Families that hold in the group but are not members of the relator
    /// set of their presentation.
    pub fn is_consequence(self) -> bool {
        matches!(self, Family::R8 | Family::R9 | Family::R10)
    }
}

/// The presentation theorems exposed by the verifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    /// `Aut(F_n)` on Whitehead generators, relators R1-R7 (plus the checked
    /// consequences R8-R10).
    Aut,
    /// `Aut(F_n, {v_1..v_l})` on the prefix-fixing Whitehead generators,
    /// R1-R7 restricted to those generators.
    AutPrefix,
    /// `Aut(F_n, {v_1..v_l})` on transvections and `Omega ∩ Aut`, S0-S5.
    TransvectionAut,
    /// `SAut(F_n, {v_1..v_l})` on transvections and `Omega ∩ SAut`, S0-S5.
    TransvectionSAut,
    /// `Omega ∩ SAut(F_n, {v_1..v_l})` on swaps over the unfixed letters.
    SwapSubgroup,
    /// `SAut(F_n, {v_1..v_l})` on transvections and swaps, relations
    /// (1)-(4), (5'), (6).
    SpecialPrefixConj,
    /// Same generators with the sign-flip relation (5); needs `n - l >= 3`.
    SpecialPrefix,
}

impl Theorem {
    pub fn parse(s: &str) -> Result<Theorem> {
        match s {
            "2.1" => Ok(Theorem::Aut),
            "2.4" => Ok(Theorem::AutPrefix),
            "2.5" => Ok(Theorem::TransvectionAut),
            "2.7" => Ok(Theorem::TransvectionSAut),
            "2.9" => Ok(Theorem::SwapSubgroup),
            "2.10" => Ok(Theorem::SpecialPrefixConj),
            "2.11" => Ok(Theorem::SpecialPrefix),
            _ => Err(Error::InvalidParameters(format!(
                "unknown theorem `{s}` (expected 2.1, 2.4, 2.5, 2.7, 2.9, 2.10 or 2.11)"
            ))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Theorem::Aut => "2.1",
            Theorem::AutPrefix => "2.4",
            Theorem::TransvectionAut => "2.5",
            Theorem::TransvectionSAut => "2.7",
            Theorem::SwapSubgroup => "2.9",
            Theorem::SpecialPrefixConj => "2.10",
            Theorem::SpecialPrefix => "2.11",
        }
    }

    pub fn families(self) -> Vec<Family> {
        use Family::*;
        match self {
            Theorem::Aut => vec![R1, R2, R3, R4, R5, R6, R7, R8, R9, R10],
            Theorem::AutPrefix => vec![R1, R2, R3, R4, R5, R6, R7],
            Theorem::TransvectionAut | Theorem::TransvectionSAut => {
                vec![S0, S1, S2, S3, S4, S5]
            }
            Theorem::SwapSubgroup => vec![W1, W2, W3],
            Theorem::SpecialPrefixConj => vec![T1, T2, T3, T4, T5Prime, T6],
            Theorem::SpecialPrefix => vec![T1, T2, T3, T4, T5, T6],
        }
    }
}

/// Enumeration context: rank, fixed-prefix length, and how the permutation
/// part of the generator set is cut down.
#[derive(Clone, Copy, Debug)]
pub struct Context {
    pub rank: usize,
    pub prefix: usize,
    /// restrict `Omega` to determinant +1 (the `SAut` variants)
    pub omega_special: bool,
    /// keep only instances all of whose generators fix the prefix pointwise
    /// (the restriction used by the prefix-fixing Whitehead presentation)
    pub restrict_to_prefix_fixing: bool,
}

impl Context {
    pub fn plain(rank: usize, prefix: usize) -> Context {
        Context {
            rank,
            prefix,
            omega_special: false,
            restrict_to_prefix_fixing: false,
        }
    }

    fn check(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::InvalidParameters("rank must be >= 1".into()));
        }
        if self.prefix > self.rank {
            return Err(Error::InvalidParameters(format!(
                "prefix length {} exceeds rank {}",
                self.prefix, self.rank
            )));
        }
        Ok(())
    }

    pub fn for_theorem(theorem: Theorem, n: usize, l: usize) -> Result<Context> {
        let ctx = Context {
            rank: n,
            prefix: l,
            omega_special: matches!(
                theorem,
                Theorem::TransvectionSAut
                    | Theorem::SwapSubgroup
                    | Theorem::SpecialPrefixConj
                    | Theorem::SpecialPrefix
            ),
            restrict_to_prefix_fixing: theorem == Theorem::AutPrefix,
        };
        ctx.check()?;
        if theorem == Theorem::Aut && l != 0 {
            return Err(Error::InvalidParameters(
                "this theorem presents the full automorphism group; use l = 0".into(),
            ));
        }
        if theorem == Theorem::SpecialPrefix && n - l < 3 {
            return Err(Error::InvalidParameters(format!(
                "the sign-flip presentation requires n - l >= 3, got n = {n}, l = {l}"
            )));
        }
        Ok(ctx)
    }

    fn letters(&self) -> Vec<Letter> {
        (0..2 * self.rank).map(Letter::from_bit).collect()
    }

    /// The unfixed letters `L'` (index > prefix).
    fn letters_prime(&self) -> Vec<Letter> {
        self.letters()
            .into_iter()
            .filter(|l| l.index() > self.prefix)
            .collect()
    }

    /// The permutation part of the generator set.
    fn omega_part(&self) -> Vec<SignedPerm> {
        enumerate_omega(self.rank)
            .into_iter()
            .filter(|s| s.fixes_prefix(self.prefix))
            .filter(|s| !self.omega_special || s.det() == 1)
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Relation instances
// ---------------------------------------------------------------------------

/// One instantiated relation: two token words claimed to realize the same
/// automorphism, plus a record of the quantified letters and sets.
#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub family: Family,
    pub rank: usize,
    pub lhs: Vec<NamedGenerator>,
    pub rhs: Vec<NamedGenerator>,
    pub side_conditions: String,
}

impl RelationInstance {
    /// Realize both sides and compare as maps.
    pub fn check(&self) -> Result<bool> {
        Ok(self.realize_lhs()? == self.realize_rhs()?)
    }

    pub fn realize_lhs(&self) -> Result<Automorphism> {
        realize_word(&self.lhs, self.rank)
    }

    pub fn realize_rhs(&self) -> Result<Automorphism> {
        realize_word(&self.rhs, self.rank)
    }

    /// The relator word `lhs · rhs^{-1}`, which composes to the identity.
    pub fn relator(&self) -> Vec<NamedGenerator> {
        let mut word = self.lhs.clone();
        word.extend(self.rhs.iter().rev().map(|t| t.inverse()));
        word
    }

    /// All generator tokens appearing on either side.
    pub fn tokens(&self) -> impl Iterator<Item = &NamedGenerator> {
        self.lhs.iter().chain(self.rhs.iter())
    }
}

fn lam(set: LetterSet, a: Letter) -> NamedGenerator {
    NamedGenerator::Whitehead(set, a)
}

fn side(parts: &[(&str, String)]) -> String {
    let mut s = String::new();
    for (i, (k, v)) in parts.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{k}={v}");
    }
    s
}

/// All well-formed `(A; a)` as (set, multiplier) pairs in canonical order.
fn lambda_pairs(rank: usize) -> Vec<(LetterSet, Letter)> {
    enumerate_lambda(rank)
        .into_iter()
        .map(|w| match w {
            WhiteheadAuto::Lambda { set, multiplier } => (set, multiplier),
            WhiteheadAuto::Perm(_) => unreachable!(),
        })
        .collect()
}

fn swap_image(a: Letter, b: Letter, c: Letter) -> Letter {
    // letter image under w_{a,b}: a -> b^{-1}, a^{-1} -> b, b -> a, b^{-1} -> a^{-1}
    if c == a {
        b.inverse()
    } else if c == a.inverse() {
        b
    } else if c == b {
        a
    } else if c == b.inverse() {
        a.inverse()
    } else {
        c
    }
}

// ---------------------------------------------------------------------------
// Per-family enumeration
// ---------------------------------------------------------------------------

/// Enumerate every instance of `family` satisfying its side conditions over
/// the context's letter ranges, in canonical order.
pub fn enumerate_relations(family: Family, ctx: &Context) -> Result<Vec<RelationInstance>> {
    ctx.check()?;
    let n = ctx.rank;
    let full = LetterSet::full(n);
    let mut out = Vec::new();
    let mut push = |lhs: Vec<NamedGenerator>, rhs: Vec<NamedGenerator>, sc: String| {
        out.push(RelationInstance {
            family,
            rank: n,
            lhs,
            rhs,
            side_conditions: sc,
        });
    };

    match family {
        // (A;a)^{-1} = (A - {a} + {a^{-1}}; a^{-1}), stated as a relator
        Family::R1 => {
            for (a_set, a) in lambda_pairs(n) {
                let inv_set = a_set.without(a).with(a.inverse());
                push(
                    vec![lam(a_set, a), lam(inv_set, a.inverse())],
                    vec![],
                    side(&[("A", a_set.to_string()), ("a", a.to_string())]),
                );
            }
        }
        // (A;a)(B;a) = (A∪B; a) if A ∩ B = {a}
        Family::R2 => {
            for (a_set, a) in lambda_pairs(n) {
                for (b_set, b) in lambda_pairs(n) {
                    if b != a {
                        continue;
                    }
                    if a_set.intersection(&b_set) != LetterSet::empty(n).with(a) {
                        continue;
                    }
                    push(
                        vec![lam(a_set, a), lam(b_set, a)],
                        vec![lam(a_set.union(&b_set), a)],
                        side(&[
                            ("A", a_set.to_string()),
                            ("B", b_set.to_string()),
                            ("a", a.to_string()),
                        ]),
                    );
                }
            }
        }
        // [(A;a), (B;b)] = 1 if A ∩ B = ∅, a^{-1} ∉ B, b^{-1} ∉ A
        Family::R3 => {
            for (a_set, a) in lambda_pairs(n) {
                for (b_set, b) in lambda_pairs(n) {
                    if !a_set.intersection(&b_set).is_empty()
                        || b_set.contains(a.inverse())
                        || a_set.contains(b.inverse())
                    {
                        continue;
                    }
                    push(
                        vec![lam(a_set, a), lam(b_set, b)],
                        vec![lam(b_set, b), lam(a_set, a)],
                        side(&[
                            ("A", a_set.to_string()),
                            ("a", a.to_string()),
                            ("B", b_set.to_string()),
                            ("b", b.to_string()),
                        ]),
                    );
                }
            }
        }
        // (B;b)(A;a) = (A∪B-{b}; a)(B;b) if A ∩ B = ∅, a^{-1} ∉ B, b^{-1} ∈ A
        Family::R4 => {
            for (a_set, a) in lambda_pairs(n) {
                for (b_set, b) in lambda_pairs(n) {
                    if !a_set.intersection(&b_set).is_empty()
                        || b_set.contains(a.inverse())
                        || !a_set.contains(b.inverse())
                    {
                        continue;
                    }
                    let merged = a_set.union(&b_set).without(b);
                    push(
                        vec![lam(b_set, b), lam(a_set, a)],
                        vec![lam(merged, a), lam(b_set, b)],
                        side(&[
                            ("A", a_set.to_string()),
                            ("a", a.to_string()),
                            ("B", b_set.to_string()),
                            ("b", b.to_string()),
                        ]),
                    );
                }
            }
        }
        // (A-{a}∪{a^{-1}}; b)(A;a) = (A-{b}∪{b^{-1}}; a) w_{a,b}
        //   if b ∈ A, b^{-1} ∉ A, a ≠ b
        Family::R5 => {
            for (a_set, a) in lambda_pairs(n) {
                for b in ctx.letters() {
                    if b == a || !a_set.contains(b) || a_set.contains(b.inverse()) {
                        continue;
                    }
                    let left_set = a_set.without(a).with(a.inverse());
                    let right_set = a_set.without(b).with(b.inverse());
                    push(
                        vec![lam(left_set, b), lam(a_set, a)],
                        vec![lam(right_set, a), NamedGenerator::SmallW(a, b)],
                        side(&[
                            ("A", a_set.to_string()),
                            ("a", a.to_string()),
                            ("b", b.to_string()),
                        ]),
                    );
                }
            }
        }
        // T (A;a) T^{-1} = (T(A); T(a)) for T ∈ Omega
        Family::R6 => {
            for t in enumerate_omega(n) {
                for (a_set, a) in lambda_pairs(n) {
                    let conj_set = t.apply_set(&a_set);
                    let conj_a = t.apply(a);
                    push(
                        vec![
                            NamedGenerator::Perm(t.clone()),
                            lam(a_set, a),
                            NamedGenerator::Perm(t.inverse()),
                        ],
                        vec![lam(conj_set, conj_a)],
                        side(&[
                            ("T", t.to_string()),
                            ("A", a_set.to_string()),
                            ("a", a.to_string()),
                        ]),
                    );
                }
            }
        }
        // multiplication table of Omega(F_n)
        Family::R7 => {
            for t1 in enumerate_omega(n) {
                for t2 in enumerate_omega(n) {
                    let prod = t1.compose(&t2);
                    push(
                        vec![
                            NamedGenerator::Perm(t1.clone()),
                            NamedGenerator::Perm(t2.clone()),
                        ],
                        vec![NamedGenerator::Perm(prod)],
                        side(&[("T1", t1.to_string()), ("T2", t2.to_string())]),
                    );
                }
            }
        }
        // (A;a) = (L-A; a^{-1})(L-{a^{-1}}; a) = (L-{a^{-1}}; a)(L-A; a^{-1})
        Family::R8 => {
            for (a_set, a) in lambda_pairs(n) {
                let co_set = full.intersection(&a_set.complement());
                let inner = full.without(a.inverse());
                for (variant, rhs) in [
                    ("first", vec![lam(co_set, a.inverse()), lam(inner, a)]),
                    ("second", vec![lam(inner, a), lam(co_set, a.inverse())]),
                ] {
                    push(
                        vec![lam(a_set, a)],
                        rhs,
                        side(&[
                            ("A", a_set.to_string()),
                            ("a", a.to_string()),
                            ("order", variant.to_string()),
                        ]),
                    );
                }
            }
        }
        // (L-{b^{-1}};b)(A;a)(L-{b};b^{-1}) = (A;a) if b, b^{-1} ∈ L-A
        Family::R9 => {
            for (a_set, a) in lambda_pairs(n) {
                for b in ctx.letters() {
                    if a_set.contains(b) || a_set.contains(b.inverse()) {
                        continue;
                    }
                    push(
                        vec![
                            lam(full.without(b.inverse()), b),
                            lam(a_set, a),
                            lam(full.without(b), b.inverse()),
                        ],
                        vec![lam(a_set, a)],
                        side(&[
                            ("A", a_set.to_string()),
                            ("a", a.to_string()),
                            ("b", b.to_string()),
                        ]),
                    );
                }
            }
        }
        // (L-{b^{-1}};b)(A;a)(L-{b};b^{-1}) = (L-A; a^{-1})
        //   if b ≠ a, b ∈ A, b^{-1} ∈ L-A
        Family::R10 => {
            for (a_set, a) in lambda_pairs(n) {
                for b in ctx.letters() {
                    if b == a || !a_set.contains(b) || a_set.contains(b.inverse()) {
                        continue;
                    }
                    let co_set = full.intersection(&a_set.complement());
                    push(
                        vec![
                            lam(full.without(b.inverse()), b),
                            lam(a_set, a),
                            lam(full.without(b), b.inverse()),
                        ],
                        vec![lam(co_set, a.inverse())],
                        side(&[
                            ("A", a_set.to_string()),
                            ("a", a.to_string()),
                            ("b", b.to_string()),
                        ]),
                    );
                }
            }
        }
        // multiplication table of the permutation part of the generator set
        Family::S0 => {
            let omega = ctx.omega_part();
            for s1 in &omega {
                for s2 in &omega {
                    let prod = s1.compose(s2);
                    push(
                        vec![
                            NamedGenerator::Perm(s1.clone()),
                            NamedGenerator::Perm(s2.clone()),
                        ],
                        vec![NamedGenerator::Perm(prod)],
                        side(&[("s1", s1.to_string()), ("s2", s2.to_string())]),
                    );
                }
            }
        }
        // M_{a,b} M_{a,b^{-1}} = 1
        Family::S1 | Family::T1 => {
            for a in ctx.letters_prime() {
                for b in ctx.letters() {
                    if b == a || b == a.inverse() {
                        continue;
                    }
                    push(
                        vec![NamedGenerator::M(a, b), NamedGenerator::M(a, b.inverse())],
                        vec![],
                        side(&[("a", a.to_string()), ("b", b.to_string())]),
                    );
                }
            }
        }
        // [M_{a,b}, M_{c,d}] = 1 if b ≠ c^{±1}, a ≠ d^{±1}, a ≠ c
        Family::S2 | Family::T2 => {
            for a in ctx.letters_prime() {
                for b in ctx.letters() {
                    if b == a || b == a.inverse() {
                        continue;
                    }
                    for c in ctx.letters_prime() {
                        if c == a || b == c || b == c.inverse() {
                            continue;
                        }
                        for d in ctx.letters() {
                            if d == c || d == c.inverse() || d == a || d == a.inverse() {
                                continue;
                            }
                            push(
                                vec![NamedGenerator::M(a, b), NamedGenerator::M(c, d)],
                                vec![NamedGenerator::M(c, d), NamedGenerator::M(a, b)],
                                side(&[
                                    ("a", a.to_string()),
                                    ("b", b.to_string()),
                                    ("c", c.to_string()),
                                    ("d", d.to_string()),
                                ]),
                            );
                        }
                    }
                }
            }
        }
        // [M_{b,a^{-1}}, M_{c,b^{-1}}] = M_{c,a}
        Family::S3 | Family::T3 => {
            for a in ctx.letters() {
                for b in ctx.letters_prime() {
                    if b == a || b == a.inverse() {
                        continue;
                    }
                    for c in ctx.letters_prime() {
                        if c == a || c == a.inverse() || c == b || c == b.inverse() {
                            continue;
                        }
                        let x = NamedGenerator::M(b, a.inverse());
                        let y = NamedGenerator::M(c, b.inverse());
                        push(
                            vec![x.clone(), y.clone(), x.inverse(), y.inverse()],
                            vec![NamedGenerator::M(c, a)],
                            side(&[
                                ("a", a.to_string()),
                                ("b", b.to_string()),
                                ("c", c.to_string()),
                            ]),
                        );
                    }
                }
            }
        }
        // w_{a,b} = M_{b^{-1},a^{-1}} M_{a^{-1},b} M_{b,a}
        Family::S4 | Family::T4 => {
            for a in ctx.letters_prime() {
                for b in ctx.letters_prime() {
                    if b == a || b == a.inverse() {
                        continue;
                    }
                    push(
                        vec![NamedGenerator::SmallW(a, b)],
                        vec![
                            NamedGenerator::M(b.inverse(), a.inverse()),
                            NamedGenerator::M(a.inverse(), b),
                            NamedGenerator::M(b, a),
                        ],
                        side(&[("a", a.to_string()), ("b", b.to_string())]),
                    );
                }
            }
        }
        // s M_{a,b} s^{-1} = M_{s(a),s(b)} for s in the permutation part
        Family::S5 => {
            for s in ctx.omega_part() {
                for a in ctx.letters_prime() {
                    for b in ctx.letters() {
                        if b == a || b == a.inverse() {
                            continue;
                        }
                        push(
                            vec![
                                NamedGenerator::Perm(s.clone()),
                                NamedGenerator::M(a, b),
                                NamedGenerator::Perm(s.inverse()),
                            ],
                            vec![NamedGenerator::M(s.apply(a), s.apply(b))],
                            side(&[
                                ("s", s.to_string()),
                                ("a", a.to_string()),
                                ("b", b.to_string()),
                            ]),
                        );
                    }
                }
            }
        }
        // w_{a,b^{-1}} w_{a,b} = 1  (i.e. w_{a,b^{-1}} = w_{a,b}^{-1})
        Family::W1 => {
            for a in ctx.letters_prime() {
                for b in ctx.letters_prime() {
                    if b == a || b == a.inverse() {
                        continue;
                    }
                    push(
                        vec![
                            NamedGenerator::SmallW(a, b.inverse()),
                            NamedGenerator::SmallW(a, b),
                        ],
                        vec![],
                        side(&[("a", a.to_string()), ("b", b.to_string())]),
                    );
                }
            }
        }
        // w_{a,b} w_{c,d} w_{a,b}^{-1} = w_{w_{a,b}(c), w_{a,b}(d)}
        Family::W2 => {
            for a in ctx.letters_prime() {
                for b in ctx.letters_prime() {
                    if b == a || b == a.inverse() {
                        continue;
                    }
                    for c in ctx.letters_prime() {
                        for d in ctx.letters_prime() {
                            if d == c || d == c.inverse() {
                                continue;
                            }
                            let t = NamedGenerator::SmallW(a, b);
                            push(
                                vec![t.clone(), NamedGenerator::SmallW(c, d), t.inverse()],
                                vec![NamedGenerator::SmallW(
                                    swap_image(a, b, c),
                                    swap_image(a, b, d),
                                )],
                                side(&[
                                    ("a", a.to_string()),
                                    ("b", b.to_string()),
                                    ("c", c.to_string()),
                                    ("d", d.to_string()),
                                ]),
                            );
                        }
                    }
                }
            }
        }
        // w_{a,b}^4 = 1
        Family::W3 | Family::T6 => {
            for a in ctx.letters_prime() {
                for b in ctx.letters_prime() {
                    if b == a || b == a.inverse() {
                        continue;
                    }
                    let t = NamedGenerator::SmallW(a, b);
                    push(
                        vec![t.clone(), t.clone(), t.clone(), t],
                        vec![],
                        side(&[("a", a.to_string()), ("b", b.to_string())]),
                    );
                }
            }
        }
        // w_{a,b} = w_{a^{-1},b^{-1}}
        Family::T5 => {
            for a in ctx.letters_prime() {
                for b in ctx.letters_prime() {
                    if b == a || b == a.inverse() {
                        continue;
                    }
                    push(
                        vec![NamedGenerator::SmallW(a, b)],
                        vec![NamedGenerator::SmallW(a.inverse(), b.inverse())],
                        side(&[("a", a.to_string()), ("b", b.to_string())]),
                    );
                }
            }
        }
        // w_{a,b} M_{c,d} w_{a,b}^{-1} = M_{w_{a,b}(c), w_{a,b}(d)}
        Family::T5Prime => {
            for a in ctx.letters_prime() {
                for b in ctx.letters_prime() {
                    if b == a || b == a.inverse() {
                        continue;
                    }
                    for c in ctx.letters_prime() {
                        for d in ctx.letters() {
                            if d == c || d == c.inverse() {
                                continue;
                            }
                            let t = NamedGenerator::SmallW(a, b);
                            push(
                                vec![t.clone(), NamedGenerator::M(c, d), t.inverse()],
                                vec![NamedGenerator::M(
                                    swap_image(a, b, c),
                                    swap_image(a, b, d),
                                )],
                                side(&[
                                    ("a", a.to_string()),
                                    ("b", b.to_string()),
                                    ("c", c.to_string()),
                                    ("d", d.to_string()),
                                ]),
                            );
                        }
                    }
                }
            }
        }
    }

    // Keep only instances built from prefix-fixing generators when asked.
    if ctx.restrict_to_prefix_fixing {
        let l = ctx.prefix;
        let mut filtered = Vec::new();
        for inst in out {
            let mut ok = true;
            for t in inst.tokens() {
                if !t.realize(n)?.fixes_prefix(l) {
                    ok = false;
                    break;
                }
            }
            if ok {
                filtered.push(inst);
            }
        }
        return Ok(filtered);
    }

    Ok(out)
}

// ---------------------------------------------------------------------------
// Verification reports
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct FailureRecord {
    pub family: String,
    pub side_conditions: String,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    /// 1-based index of the first generator whose images differ, with both
    /// image words.
    pub first_differing_image: Option<(usize, Vec<i32>, Vec<i32>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub consequence: bool,
    pub instances: usize,
    pub failures: Vec<FailureRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub n: usize,
    pub l: usize,
    pub families: Vec<FamilyReport>,
    pub total_instances: usize,
    pub total_failures: usize,
    pub pass: bool,
}

/// Enumerate and check a single family, aggregating failures.
pub fn verify_family(family: Family, ctx: &Context) -> Result<FamilyReport> {
    let instances = enumerate_relations(family, ctx)?;
    let mut failures = Vec::new();
    for inst in &instances {
        let lhs = inst.realize_lhs()?;
        let rhs = inst.realize_rhs()?;
        if lhs != rhs {
            let diff = lhs
                .images()
                .iter()
                .zip(rhs.images())
                .position(|(x, y)| x != y)
                .map(|i| {
                    (
                        i + 1,
                        lhs.images()[i].to_signed(),
                        rhs.images()[i].to_signed(),
                    )
                });
            failures.push(FailureRecord {
                family: family.tag().to_string(),
                side_conditions: inst.side_conditions.clone(),
                lhs: inst.lhs.iter().map(|t| t.to_string()).collect(),
                rhs: inst.rhs.iter().map(|t| t.to_string()).collect(),
                first_differing_image: diff,
            });
        }
    }
    Ok(FamilyReport {
        family: family.tag().to_string(),
        consequence: family.is_consequence(),
        instances: instances.len(),
        failures,
    })
}

/// Run the full suite for one theorem at parameters `(n, l)`.
pub fn verify_presentation(theorem: Theorem, n: usize, l: usize) -> Result<VerificationReport> {
    verify_presentation_families(theorem, n, l, None)
}

/// Same, restricted to a subset of family tags when `only` is given.
pub fn verify_presentation_families(
    theorem: Theorem,
    n: usize,
    l: usize,
    only: Option<&[String]>,
) -> Result<VerificationReport> {
    let ctx = Context::for_theorem(theorem, n, l)?;
    let mut families = Vec::new();
    for family in theorem.families() {
        if let Some(filter) = only {
            if !filter.iter().any(|f| f == family.tag()) {
                continue;
            }
        }
        families.push(verify_family(family, &ctx)?);
    }
    let total_instances = families.iter().map(|f| f.instances).sum();
    let total_failures = families.iter().map(|f| f.failures.len()).sum();
    Ok(VerificationReport {
        theorem: theorem.label().to_string(),
        n,
        l,
        families,
        total_instances,
        total_failures,
        pass: total_failures == 0,
    })
}
