//! Identities between words, the `u ≈ 0` shorthand, permutational identities,
//! identity systems, and the `.ids` text format.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::permgroups::Permutation;
use crate::words::{parse_word, Letter, Word};

/// An identity: either a plain equation between two words, or the shorthand
/// `u ≈ 0`, which stands for the pair `xu ≈ ux ≈ u` with `x` a fresh letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Identity {
    Plain(Word, Word),
    Zero(Word),
}

impl Identity {
    /// A plain identity is trivial iff its sides are equal letter-for-letter.
    /// `u ≈ 0` is never trivial.
    pub fn is_trivial(&self) -> bool {
        match self {
            Identity::Plain(u, v) => u == v,
            Identity::Zero(_) => false,
        }
    }

    /// The letters occurring on either side.
    pub fn letters(&self) -> BTreeSet<Letter> {
        match self {
            Identity::Plain(u, v) => u.content().union(&v.content()).copied().collect(),
            Identity::Zero(u) => u.content(),
        }
    }

    pub fn max_side_len(&self) -> usize {
        match self {
            Identity::Plain(u, v) => u.len().max(v.len()),
            Identity::Zero(u) => u.len(),
        }
    }

    /// Joint canonical form: letters renamed by first occurrence scanning the
    /// left side, then the right. Used for set-wise system comparison.
    pub fn canonical(&self) -> Identity {
        match self {
            Identity::Zero(u) => Identity::Zero(u.canonical_form()),
            Identity::Plain(u, v) => {
                let joint = u.concat(v).canonical_form();
                let (lu, lv) = joint.letters().split_at(u.len());
                Identity::Plain(
                    Word::new(lu.to_vec()),
                    Word::new(lv.to_vec()),
                )
            }
        }
    }

    /// Expands the `u ≈ 0` shorthand into plain identities, using one fresh
    /// letter on both sides. Plain identities map to themselves.
    pub fn expand_zero(&self) -> Vec<(Word, Word)> {
        match self {
            Identity::Plain(u, v) => vec![(u.clone(), v.clone())],
            Identity::Zero(u) => {
                let z = fresh_letter(&u.content());
                let zw = Word::single(z);
                vec![(zw.concat(u), u.clone()), (u.concat(&zw), u.clone())]
            }
        }
    }
}

/// The least letter index not occurring in the given content.
pub fn fresh_letter(content: &BTreeSet<Letter>) -> Letter {
    let mut i = 0u32;
    while content.contains(&Letter(i)) {
        i += 1;
    }
    Letter(i)
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identity::Plain(u, v) => write!(f, "{u} = {v}"),
            Identity::Zero(u) => write!(f, "{u} = 0"),
        }
    }
}

/// The permutational identity of length n: `x_1 x_2 … x_n ≈ x_1π x_2π … x_nπ`.
/// Trivial iff π is the identity permutation.
pub fn make_permutational(n: usize, pi: &Permutation) -> Result<Identity> {
    if n < 2 {
        return Err(Error::Precondition("permutational identities need length at least 2".into()));
    }
    if pi.degree() != n {
        return Err(Error::DegreeMismatch { left: n, right: pi.degree() });
    }
    let lhs = Word::from_indices(&(0..n as u32).collect::<Vec<_>>());
    let rhs = Word::new((1..=n).map(|i| Letter(pi.image(i) as u32 - 1)).collect());
    Ok(Identity::Plain(lhs, rhs))
}

/// Does the identity hold in the variety of all semilattices?
/// A plain identity holds iff the two contents are equal; `u ≈ 0` never
/// holds, since its expansion introduces a fresh letter.
pub fn holds_in_sl(id: &Identity) -> bool {
    match id {
        Identity::Plain(u, v) => u.content() == v.content(),
        Identity::Zero(_) => false,
    }
}

/// A finite sequence of identities. Order-insensitive semantics: two systems
/// with equal identity sets define the same variety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentitySystem {
    items: Vec<Identity>,
}

impl IdentitySystem {
    pub fn new(items: Vec<Identity>) -> IdentitySystem {
        IdentitySystem { items }
    }

    pub fn empty() -> IdentitySystem {
        IdentitySystem { items: Vec::new() }
    }

    pub fn identities(&self) -> &[Identity] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn has_zero(&self) -> bool {
        self.items.iter().any(|i| matches!(i, Identity::Zero(_)))
    }

    pub fn first_zero(&self) -> Option<&Word> {
        self.items.iter().find_map(|i| match i {
            Identity::Zero(u) => Some(u),
            _ => None,
        })
    }

    /// Union of two systems (basis of the meet of the two varieties).
    pub fn union(&self, other: &IdentitySystem) -> IdentitySystem {
        let mut items = self.items.clone();
        for id in &other.items {
            if !items.contains(id) {
                items.push(id.clone());
            }
        }
        IdentitySystem { items }
    }

    /// The longest side among the expanded identities; the least usable
    /// saturation bound.
    pub fn max_expanded_side_len(&self) -> usize {
        self.items
            .iter()
            .flat_map(|i| i.expand_zero())
            .map(|(l, r)| l.len().max(r.len()))
            .max()
            .unwrap_or(1)
    }

    /// The largest letter count of any single identity.
    pub fn max_letters(&self) -> usize {
        self.items.iter().map(|i| i.letters().len()).max().unwrap_or(1)
    }

    /// Set-wise comparison after joint canonicalization of both sides.
    /// Equality here is syntactic; it does not claim theory equality.
    pub fn same_identity_set(&self, other: &IdentitySystem) -> bool {
        let a: BTreeSet<String> = self.items.iter().map(|i| i.canonical().to_string()).collect();
        let b: BTreeSet<String> = other.items.iter().map(|i| i.canonical().to_string()).collect();
        a == b
    }
}

impl fmt::Display for IdentitySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for id in &self.items {
            writeln!(f, "{id};")?;
        }
        Ok(())
    }
}

/// Parses an identity-system file: statements `WORD = WORD ;` or
/// `WORD = 0 ;`, `#` comments to end of line, whitespace insignificant.
pub fn parse_system(text: &str) -> Result<IdentitySystem> {
    let mut items = Vec::new();
    for (stmt, line, col) in split_statements(text)? {
        items.push(parse_identity_at(&stmt, line, col)?);
    }
    Ok(IdentitySystem { items })
}

/// Parses a single identity, `u = v` or `u = 0`, trailing `;` optional.
pub fn parse_identity(text: &str) -> Result<Identity> {
    let t = text.trim().trim_end_matches(';');
    parse_identity_at(t, 1, 1)
}

fn parse_identity_at(stmt: &str, line: usize, col: usize) -> Result<Identity> {
    let mut sides = stmt.splitn(2, '=');
    let lhs = sides.next().unwrap_or("");
    let rhs = sides
        .next()
        .ok_or(Error::Parse { line, col, msg: "expected '=' in statement".into() })?;
    let relocate = |e: Error| match e {
        Error::Parse { msg, .. } => Error::Parse { line, col, msg },
        other => other,
    };
    let u = parse_word(lhs).map_err(relocate)?;
    if rhs.trim() == "0" {
        Ok(Identity::Zero(u))
    } else {
        let v = parse_word(rhs).map_err(relocate)?;
        Ok(Identity::Plain(u, v))
    }
}

// Splits the text into `;`-terminated statements, stripping comments and
// tracking the (line, column) where each statement starts.
fn split_statements(text: &str) -> Result<Vec<(String, usize, usize)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start: Option<(usize, usize)> = None;
    let mut in_comment = false;
    let mut line = 1usize;
    let mut col = 0usize;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
            col = 0;
            in_comment = false;
            cur.push(' ');
            continue;
        }
        col += 1;
        if in_comment {
            continue;
        }
        match c {
            '#' => in_comment = true,
            ';' => {
                let (l, c0) = start.take().unwrap_or((line, col));
                if cur.trim().is_empty() {
                    return Err(Error::Parse { line: l, col: c0, msg: "empty statement".into() });
                }
                out.push((std::mem::take(&mut cur), l, c0));
            }
            _ => {
                if !c.is_whitespace() && start.is_none() {
                    start = Some((line, col));
                }
                cur.push(c);
            }
        }
    }
    if let Some((l, c0)) = start {
        if !cur.trim().is_empty() {
            return Err(Error::Parse { line: l, col: c0, msg: "missing ';' after statement".into() });
        }
    }
    Ok(out)
}

/// Renders a system in the `.ids` grammar; `parse_system(format_system(s))`
/// has the same identity set as `s`.
pub fn format_system(system: &IdentitySystem) -> String {
    system.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroups::Permutation;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn permutational_identities() {
        let p13 = Permutation::from_cycles("(13)", 3).unwrap();
        let id = make_permutational(3, &p13).unwrap();
        assert_eq!(id, Identity::Plain(w("xyz"), w("zyx")));
        assert!(!id.is_trivial());

        let e = Permutation::identity(3);
        assert!(make_permutational(3, &e).unwrap().is_trivial());

        let p234 = Permutation::from_cycles("(234)", 4).unwrap();
        let id = make_permutational(4, &p234).unwrap();
        assert_eq!(id, Identity::Plain(w("xyzt"), w("xzty")));
    }

    #[test]
    fn zero_expansion() {
        let id = Identity::Zero(w("x^2"));
        let pairs = id.expand_zero();
        assert_eq!(pairs, vec![(w("yxx"), w("xx")), (w("xxy"), w("xx"))]);

        let plain = Identity::Plain(w("xy"), w("yx"));
        assert_eq!(plain.expand_zero(), vec![(w("xy"), w("yx"))]);

        let id = Identity::Zero(w("xyzt"));
        let pairs = id.expand_zero();
        let fresh = Letter(4);
        assert_eq!(pairs[0].0.letters()[0], fresh);
        assert_eq!(pairs[1].0.letters()[4], fresh);
        for (l, r) in pairs {
            assert!(!l.content().is_empty() && !r.content().contains(&fresh));
        }
    }

    #[test]
    fn semilattice_rule() {
        assert!(holds_in_sl(&Identity::Plain(w("xy"), w("yx"))));
        assert!(holds_in_sl(&Identity::Plain(w("x"), w("xx"))));
        assert!(!holds_in_sl(&Identity::Zero(w("xxy"))));
        assert!(!holds_in_sl(&Identity::Plain(w("xy"), w("xz"))));
    }

    #[test]
    fn parse_and_format_round_trip() {
        let s = parse_system("xyz = zyx; xxy = 0;").unwrap();
        assert_eq!(s.identities().len(), 2);
        assert_eq!(s.identities()[0], Identity::Plain(w("xyz"), w("zyx")));
        assert_eq!(s.identities()[1], Identity::Zero(w("xxy")));

        let again = parse_system(&format_system(&s)).unwrap();
        assert!(s.same_identity_set(&again));

        let c = parse_system("xy = yx;").unwrap();
        assert_eq!(c.identities(), &[Identity::Plain(w("xy"), w("yx"))]);

        let p = parse_system("xyzt = 0; xyx = 0; xx = 0; xyz = yxz;").unwrap();
        assert_eq!(p.identities().len(), 4);
        assert!(p.has_zero());
        assert_eq!(p.first_zero(), Some(&w("xyzt")));
    }

    #[test]
    fn parser_reports_positions() {
        match parse_system("xy = yx;\n x? = 0;") {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 2);
                assert!(col >= 2);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_system("xy yx;").is_err());
        assert!(parse_system("xy = yx").is_err());
        // comments and exponents
        let s = parse_system("# comment\n x^2 y = 0 ; # tail\n").unwrap();
        assert_eq!(s.identities(), &[Identity::Zero(w("xxy"))]);
    }

    #[test]
    fn canonical_identity_comparison() {
        let a = parse_system("ab = ba;").unwrap();
        let b = parse_system("xy = yx;").unwrap();
        assert!(a.same_identity_set(&b));
        let c = parse_system("xy = xy;").unwrap();
        assert!(!a.same_identity_set(&c));
    }

    #[test]
    fn fresh_letter_avoids_content() {
        let u = w("xzt"); // indices 0, 2, 3 — least absent is 1
        assert_eq!(fresh_letter(&u.content()), Letter(1));
        let v = w("xyzt");
        assert_eq!(fresh_letter(&v.content()), Letter(4));
    }
}
