//! Line-oriented text formats.
//!
//! Trees are written Newick-style with unlabeled leaves, e.g. `(*,(*,*))`.
//! A tanglegram line has three `|`-separated fields:
//!
//! ```text
//! ((1,2),3) | (1,(2,3)) | id          labels: equal labels are matched
//! (*,(*,*)) | (*,(*,*)) | p=[0,2,1]   perm: left leaf i -> right leaf p[i]
//! ```
//!
//! Permutation indices count leaves in the order they are written, which
//! for canonical output is the canonical leaf order.
//!
//! A (multi)deck file starts with `n=<size>`, followed by one card per line.
//! Multideck lines carry a leading multiplicity.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tanglegram::{Tanglegram, TanglegramMultideck};
use crate::tree::{Shape, Tree, TreeMultideck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    /// `*` leaves and an explicit `p=[...]` permutation.
    #[default]
    Perm,
    /// Left leaves labeled `1..n`, right leaves labeled by their partner.
    Labels,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perm" => Ok(Format::Perm),
            "labels" => Ok(Format::Labels),
            other => Err(Error::parse(0, format!("unknown format {other:?}"))),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    base: usize,
    labels: Vec<Option<String>>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, base: usize) -> Self {
        Parser {
            src,
            pos: 0,
            base,
            labels: Vec::new(),
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.base + self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected {want:?}, found {c:?}"))),
            None => Err(self.err(format!("expected {want:?}, found end of input"))),
        }
    }

    fn node(&mut self) -> Result<Shape> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let a = self.node()?;
                self.expect(',')?;
                let b = self.node()?;
                self.skip_ws();
                if self.peek() == Some(',') {
                    return Err(self.err("only binary trees are supported"));
                }
                self.expect(')')?;
                Ok(Shape::Pair(Box::new(a), Box::new(b)))
            }
            Some('*') => {
                self.pos += 1;
                Ok(self.push_leaf(None))
            }
            Some(c) if is_label_char(c) => {
                let start = self.pos;
                while self.peek().is_some_and(is_label_char) {
                    self.pos += 1;
                }
                let label = self.src[start..self.pos].to_string();
                Ok(self.push_leaf(Some(label)))
            }
            Some(c) => Err(self.err(format!("unexpected {c:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn push_leaf(&mut self, label: Option<String>) -> Shape {
        self.labels.push(label);
        Shape::Leaf(self.labels.len() - 1)
    }

    fn finish(mut self) -> Result<(Shape, Vec<Option<String>>)> {
        let shape = self.node()?;
        self.skip_ws();
        if self.peek() == Some(';') {
            self.pos += 1;
            self.skip_ws();
        }
        if self.pos != self.src.len() {
            return Err(self.err("trailing input"));
        }
        Ok((shape, self.labels))
    }
}

fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-'
}

/// Parses a Newick tree, leaves labeled by their written position.
fn parse_shape(src: &str, base: usize) -> Result<(Shape, Vec<Option<String>>)> {
    Parser::new(src, base).finish()
}

pub fn parse_tree(src: &str) -> Result<Tree> {
    Ok(parse_shape(src, 0)?.0.canonicalize().0)
}

pub fn parse_tanglegram(src: &str) -> Result<Tanglegram> {
    let fields: Vec<&str> = src.split('|').collect();
    if fields.len() != 3 {
        return Err(Error::parse(0, "expected `LEFT | RIGHT | MATCHING`"));
    }
    let left_base = 0;
    let right_base = fields[0].len() + 1;
    let match_base = right_base + fields[1].len() + 1;
    let (left_shape, left_labels) = parse_shape(fields[0], left_base)?;
    let (right_shape, right_labels) = parse_shape(fields[1], right_base)?;
    let n = left_labels.len();
    if right_labels.len() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: right_labels.len(),
        });
    }
    let matching = fields[2].trim();
    // written left index -> written right index
    let written: Vec<usize> = if matching == "id" {
        label_matching(&left_labels, &right_labels, match_base)?
    } else if let Some(rest) = matching.strip_prefix("p=") {
        let perm = parse_index_list(rest, match_base)?;
        if perm.len() != n {
            return Err(Error::NotBijection { size: n });
        }
        perm
    } else {
        return Err(Error::parse(
            match_base,
            "matching must be `id` or `p=[...]`",
        ));
    };
    let (left, left_order) = left_shape.canonicalize();
    let (right, right_order) = right_shape.canonicalize();
    let mut right_pos = vec![0; n];
    for (pos, &w) in right_order.iter().enumerate() {
        right_pos[w] = pos;
    }
    let mut raw = Vec::with_capacity(n);
    for &w in &left_order {
        let r = *written.get(w).ok_or(Error::NotBijection { size: n })?;
        if r >= n {
            return Err(Error::NotBijection { size: n });
        }
        raw.push(right_pos[r]);
    }
    Tanglegram::new(left, right, &raw)
}

fn label_matching(
    left: &[Option<String>],
    right: &[Option<String>],
    base: usize,
) -> Result<Vec<usize>> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, label) in right.iter().enumerate() {
        let label = label
            .as_deref()
            .ok_or_else(|| Error::parse(base, "`id` matching needs labeled leaves"))?;
        if index.insert(label, i).is_some() {
            return Err(Error::parse(
                base,
                format!("duplicate right label {label:?}"),
            ));
        }
    }
    let mut used = vec![false; right.len()];
    let mut out = Vec::with_capacity(left.len());
    for label in left {
        let label = label
            .as_deref()
            .ok_or_else(|| Error::parse(base, "`id` matching needs labeled leaves"))?;
        let &r = index
            .get(label)
            .ok_or_else(|| Error::parse(base, format!("left label {label:?} has no partner")))?;
        if used[r] {
            return Err(Error::parse(
                base,
                format!("duplicate left label {label:?}"),
            ));
        }
        used[r] = true;
        out.push(r);
    }
    Ok(out)
}

fn parse_index_list(src: &str, base: usize) -> Result<Vec<usize>> {
    let inner = src
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::parse(base, "expected `[i,j,...]`"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| Error::parse(base, format!("bad index {:?}", tok.trim())))
        })
        .collect()
}

fn write_labeled(t: &Tree, labels: &[usize], next: &mut usize, out: &mut String) {
    match t.children() {
        None => {
            out.push_str(&labels[*next].to_string());
            *next += 1;
        }
        Some((a, b)) => {
            out.push('(');
            write_labeled(a, labels, next, out);
            out.push(',');
            write_labeled(b, labels, next, out);
            out.push(')');
        }
    }
}

pub fn format_tanglegram(t: &Tanglegram, format: Format) -> String {
    match format {
        Format::Perm => {
            let p: Vec<String> = t.matching().iter().map(|x| x.to_string()).collect();
            format!("{} | {} | p=[{}]", t.left(), t.right(), p.join(","))
        }
        Format::Labels => {
            let n = t.size();
            let left_labels: Vec<usize> = (1..=n).collect();
            let mut right_labels = vec![0; n];
            for l in 0..n {
                right_labels[t.partner(l)] = l + 1;
            }
            let mut out = String::new();
            write_labeled(t.left(), &left_labels, &mut 0, &mut out);
            out.push_str(" | ");
            write_labeled(t.right(), &right_labels, &mut 0, &mut out);
            out.push_str(" | id");
            out
        }
    }
}

impl fmt::Display for Tanglegram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_tanglegram(self, Format::Perm))
    }
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_tree(s)
    }
}

impl FromStr for Tanglegram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_tanglegram(s)
    }
}

/// Either kind of object a text line can hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Tree(Tree),
    Tanglegram(Tanglegram),
}

impl Item {
    pub fn parse(line: &str) -> Result<Item> {
        if line.contains('|') {
            parse_tanglegram(line).map(Item::Tanglegram)
        } else {
            parse_tree(line).map(Item::Tree)
        }
    }
}

/// A parsed multideck file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultideckFile {
    Trees(TreeMultideck),
    Tanglegrams(TanglegramMultideck),
}

pub fn write_multideck(d: &TanglegramMultideck, format: Format) -> String {
    let mut out = format!("n={}\n", d.parent_size());
    for (card, m) in d.iter() {
        out.push_str(&format!("{m} {}\n", format_tanglegram(card, format)));
    }
    out
}

pub fn write_tree_multideck(d: &TreeMultideck) -> String {
    let mut out = format!("n={}\n", d.parent_size());
    for (card, m) in d.iter() {
        out.push_str(&format!("{m} {card}\n"));
    }
    out
}

pub fn write_deck<'a>(
    parent_size: usize,
    cards: impl IntoIterator<Item = &'a Tanglegram>,
    format: Format,
) -> String {
    let mut out = format!("n={parent_size}\n");
    for card in cards {
        out.push_str(&format_tanglegram(card, format));
        out.push('\n');
    }
    out
}

/// Meaningful lines with their byte offsets; blanks and `#` comments dropped.
fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut offset = 0;
    src.split_inclusive('\n').filter_map(move |raw| {
        let start = offset;
        offset += raw.len();
        let line = raw.trim();
        (!line.is_empty() && !line.starts_with('#')).then_some((start, line))
    })
}

fn parse_header(src: &str) -> Result<(usize, impl Iterator<Item = (usize, &str)>)> {
    let mut lines = content_lines(src);
    let (pos, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "missing `n=<size>` header"))?;
    let n = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse::<usize>().ok())
        .ok_or_else(|| Error::parse(pos, "expected `n=<size>` header"))?;
    Ok((n, lines))
}

pub fn parse_multideck(src: &str) -> Result<MultideckFile> {
    let (n, lines) = parse_header(src)?;
    let mut trees = Vec::new();
    let mut tangles = Vec::new();
    for (pos, line) in lines {
        let (count, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::parse(pos, "expected `<multiplicity> <card>`"))?;
        let m: usize = count
            .parse()
            .map_err(|_| Error::parse(pos, format!("bad multiplicity {count:?}")))?;
        match Item::parse(rest.trim()).map_err(|e| shift(e, pos))? {
            Item::Tree(t) => trees.push((t, m)),
            Item::Tanglegram(t) => tangles.push((t, m)),
        }
    }
    match (trees.is_empty(), tangles.is_empty()) {
        (true, false) => Ok(MultideckFile::Tanglegrams(TanglegramMultideck::new(
            n, tangles,
        )?)),
        (false, true) => Ok(MultideckFile::Trees(TreeMultideck::new(n, trees)?)),
        (true, true) => Err(Error::InvalidMultideck("no cards".into())),
        (false, false) => Err(Error::InvalidMultideck(
            "mixes trees and tanglegrams".into(),
        )),
    }
}

/// Parses a deck file: header plus one card per line.
pub fn parse_deck(src: &str) -> Result<(usize, Vec<Tanglegram>)> {
    let (n, lines) = parse_header(src)?;
    let mut cards = Vec::new();
    for (pos, line) in lines {
        let card = parse_tanglegram(line).map_err(|e| shift(e, pos))?;
        if card.size() + 1 != n {
            return Err(Error::InvalidMultideck(format!(
                "card {card} has size {}, expected {}",
                card.size(),
                n.saturating_sub(1)
            )));
        }
        cards.push(card);
    }
    Ok((n, cards))
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_round_trip_and_canonical_order() {
        let t = parse_tree("((*,*),*)").unwrap();
        assert_eq!(t.to_string(), "(*,(*,*))");
        assert_eq!(t, Tree::caterpillar(3).unwrap());
        assert_eq!(parse_tree(" ( * , ( * , * ) ) ; ").unwrap(), t);
    }

    #[test]
    fn tree_parse_errors() {
        assert!(parse_tree("(*,*,*)").is_err());
        assert!(parse_tree("(*,*").is_err());
        assert!(parse_tree("(*,*))").is_err());
        assert!(parse_tree("").is_err());
        assert!(matches!(
            parse_tree("(*;*)"),
            Err(Error::Parse { pos: 2, .. })
        ));
    }

    #[test]
    fn label_form() {
        let t = parse_tanglegram("((1,2),3) | (1,(2,3)) | id").unwrap();
        let c3 = Tree::caterpillar(3).unwrap();
        assert_eq!(t.left(), &c3);
        assert_eq!(t.right(), &c3);
        // leaf 3 sits alone on the left and inside the cherry on the right
        assert_eq!(t, Tanglegram::new(c3.clone(), c3, &[1, 0, 2]).unwrap());
    }

    #[test]
    fn perm_form_and_both_serializations() {
        let t = parse_tanglegram("((1,2),3) | (1,(2,3)) | id").unwrap();
        let perm = format_tanglegram(&t, Format::Perm);
        assert_eq!(perm, "(*,(*,*)) | (*,(*,*)) | p=[1,0,2]");
        assert_eq!(parse_tanglegram(&perm).unwrap(), t);
        let labels = format_tanglegram(&t, Format::Labels);
        assert_eq!(parse_tanglegram(&labels).unwrap(), t);
    }

    #[test]
    fn tanglegram_parse_errors() {
        assert!(parse_tanglegram("(1,2) | (1,2)").is_err());
        assert!(parse_tanglegram("(1,2) | (1,3) | id").is_err());
        assert!(parse_tanglegram("(1,1) | (1,2) | id").is_err());
        assert!(parse_tanglegram("(*,*) | (*,*) | id").is_err());
        assert!(parse_tanglegram("(*,*) | (*,*) | p=[0,0]").is_err());
        assert!(parse_tanglegram("(*,*) | (*,(*,*)) | p=[0,1]").is_err());
        assert!(parse_tanglegram("(*,*) | (*,*) | q").is_err());
    }

    #[test]
    fn multideck_file_round_trip() {
        let t = parse_tanglegram("((1,2),(3,4)) | (1,(2,(3,4))) | id").unwrap();
        let d = t.multideck().unwrap();
        for format in [Format::Perm, Format::Labels] {
            let text = write_multideck(&d, format);
            assert!(text.starts_with("n=4\n"));
            assert_eq!(
                parse_multideck(&text).unwrap(),
                MultideckFile::Tanglegrams(d.clone())
            );
        }
    }

    #[test]
    fn tree_multideck_file() {
        let d = Tree::caterpillar(5).unwrap().multideck().unwrap();
        let text = write_tree_multideck(&d);
        assert_eq!(text, "n=5\n5 (*,(*,(*,*)))\n");
        assert_eq!(parse_multideck(&text).unwrap(), MultideckFile::Trees(d));
    }

    #[test]
    fn multideck_file_errors() {
        assert!(parse_multideck("").is_err());
        assert!(parse_multideck("size=3\n").is_err());
        assert!(parse_multideck("n=3\n").is_err());
        assert!(parse_multideck("n=3\nx (*,*)\n").is_err());
        assert!(parse_multideck("n=3\n2 (*,*)\n").is_err());
    }

    #[test]
    fn deck_file() {
        let t = parse_tanglegram("((1,2),(3,4)) | (1,(2,(3,4))) | id").unwrap();
        let deck = t.deck().unwrap();
        let text = write_deck(4, &deck, Format::Perm);
        let (n, cards) = parse_deck(&text).unwrap();
        assert_eq!(n, 4);
        assert_eq!(
            cards.into_iter().collect::<std::collections::BTreeSet<_>>(),
            deck
        );
    }
}
