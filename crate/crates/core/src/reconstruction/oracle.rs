//! Brute-force search over enumerated tanglegrams.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::enumeration::{
    enumerate_caterpillar_tanglegrams_with_ceiling, enumerate_tanglegrams_with_ceiling,
    enumerate_trees, tanglegrams_on, DEFAULT_CEILING, MAX_CEILING,
};
use crate::error::{Error, Result};
use crate::tanglegram::{Tanglegram, TanglegramMultideck};
use crate::tree::{Tree, TreeMultideck};

type PairIndex = HashMap<TanglegramMultideck, Vec<Tanglegram>>;
type PairCache = Mutex<HashMap<(Tree, Tree), Arc<PairIndex>>>;

fn pair_index(left: &Tree, right: &Tree) -> Arc<PairIndex> {
    static CACHE: OnceLock<PairCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (left.clone(), right.clone());
    if let Some(hit) = cache.lock().expect("oracle cache").get(&key) {
        return Arc::clone(hit);
    }
    let decks: Vec<(TanglegramMultideck, Tanglegram)> = tanglegrams_on(left, right)
        .into_par_iter()
        .map(|t| (t.multideck().expect("size >= 2"), t))
        .collect();
    let mut index = PairIndex::new();
    for (d, t) in decks {
        index.entry(d).or_default().push(t);
    }
    let index = Arc::new(index);
    cache
        .lock()
        .expect("oracle cache")
        .entry(key)
        .or_insert(index)
        .clone()
}

fn trees_with(deck: &TreeMultideck) -> Result<Vec<Tree>> {
    Ok(enumerate_trees(deck.parent_size())?
        .into_iter()
        .filter(|t| t.multideck().map(|d| &d == deck).unwrap_or(false))
        .collect())
}

/// Every tanglegram whose multideck is `d`, in canonical order.
pub fn oracle_matches(d: &TanglegramMultideck, ceiling: usize) -> Result<Vec<Tanglegram>> {
    let n = d.parent_size();
    if ceiling > MAX_CEILING {
        return Err(Error::AboveCeiling {
            n: ceiling,
            ceiling: MAX_CEILING,
        });
    }
    if n > ceiling {
        return Err(Error::AboveCeiling { n, ceiling });
    }
    let lefts = trees_with(&d.left_projection())?;
    let rights = trees_with(&d.right_projection())?;
    let mut out = BTreeSet::new();
    for l in &lefts {
        for r in &rights {
            if let Some(found) = pair_index(l, r).get(d) {
                out.extend(found.iter().cloned());
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// The unique tanglegram with multideck `d`, found by exhaustive search up
/// to [`DEFAULT_CEILING`].
pub fn oracle_search(d: &TanglegramMultideck) -> Result<Tanglegram> {
    oracle_search_with_ceiling(d, DEFAULT_CEILING)
}

pub fn oracle_search_with_ceiling(d: &TanglegramMultideck, ceiling: usize) -> Result<Tanglegram> {
    let n = d.parent_size();
    let mut found = oracle_matches(d, ceiling)?;
    match found.len() {
        0 => Err(Error::inconsistent("no tanglegram has this multideck")),
        1 => Ok(found.pop().expect("one match")),
        count => Err(Error::Ambiguous { size: n, count }),
    }
}

/// Lookup for `(C_5, C_5)` with `v_1` matched into the right cherry.
pub(super) fn small_case_lookup(d: &TanglegramMultideck) -> Result<Tanglegram> {
    static TABLE: OnceLock<HashMap<TanglegramMultideck, Vec<Tanglegram>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let c5 = Tree::caterpillar(5).expect("size 5");
        let mut table: HashMap<_, Vec<_>> = HashMap::new();
        for t in tanglegrams_on(&c5, &c5) {
            if t.partner(0) >= 3 {
                table
                    .entry(t.multideck().expect("size 5"))
                    .or_default()
                    .push(t);
            }
        }
        table
    });
    match table.get(d).map(Vec::as_slice) {
        Some([t]) => Ok(t.clone()),
        Some(many) => Err(Error::Ambiguous {
            size: 5,
            count: many.len(),
        }),
        None => Err(Error::inconsistent(
            "multideck is not in the size-5 cherry table",
        )),
    }
}

/// What two tanglegrams are compared by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeckVariant {
    #[default]
    Multideck,
    /// Distinct cards only.
    Deck,
}

impl std::str::FromStr for DeckVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multideck" => Ok(DeckVariant::Multideck),
            "deck" => Ok(DeckVariant::Deck),
            other => Err(Error::parse(0, format!("unknown deck variant `{other}`"))),
        }
    }
}

/// Tanglegrams of one size grouped by (multi)deck.
#[derive(Debug, Clone)]
pub struct UniquenessReport {
    pub size: usize,
    pub variant: DeckVariant,
    pub caterpillar_only: bool,
    /// Tanglegrams examined.
    pub examined: usize,
    /// Distinct (multi)decks among them.
    pub classes: usize,
    /// Groups of two or more tanglegrams sharing a (multi)deck.
    pub collisions: Vec<Vec<Tanglegram>>,
}

impl UniquenessReport {
    pub fn is_unique(&self) -> bool {
        self.collisions.is_empty()
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Multi(TanglegramMultideck),
    Set(BTreeSet<Tanglegram>),
}

/// Groups every tanglegram of size `n` by its (multi)deck and reports the
/// groups with more than one member. With `caterpillar_only`, only
/// tanglegrams with a caterpillar side are examined, but they are compared
/// against all tanglegrams of size `n`.
pub fn verify_multideck_uniqueness(
    n: usize,
    caterpillar_only: bool,
    variant: DeckVariant,
) -> Result<UniquenessReport> {
    verify_multideck_uniqueness_with_ceiling(n, caterpillar_only, variant, DEFAULT_CEILING)
}

pub fn verify_multideck_uniqueness_with_ceiling(
    n: usize,
    caterpillar_only: bool,
    variant: DeckVariant,
    ceiling: usize,
) -> Result<UniquenessReport> {
    if n < 2 {
        return Err(Error::SizeTooSmall { min: 2, got: n });
    }
    let all = enumerate_tanglegrams_with_ceiling(n, ceiling)?;
    let examined = if caterpillar_only {
        enumerate_caterpillar_tanglegrams_with_ceiling(n, ceiling)?.len()
    } else {
        all.len()
    };
    let keyed: Vec<(Key, Tanglegram)> = all
        .into_par_iter()
        .map(|t| {
            let key = match variant {
                DeckVariant::Multideck => Key::Multi(t.multideck().expect("n >= 2")),
                DeckVariant::Deck => Key::Set(t.deck().expect("n >= 2")),
            };
            (key, t)
        })
        .collect();
    let mut groups: BTreeMap<Key, Vec<Tanglegram>> = BTreeMap::new();
    for (k, t) in keyed {
        groups.entry(k).or_default().push(t);
    }
    let relevant =
        |g: &Vec<Tanglegram>| !caterpillar_only || g.iter().any(Tanglegram::has_caterpillar_side);
    let classes = groups.values().filter(|g| relevant(g)).count();
    let collisions = groups
        .into_values()
        .filter(|g| g.len() > 1 && relevant(g))
        .collect();
    Ok(UniquenessReport {
        size: n,
        variant,
        caterpillar_only,
        examined,
        classes,
        collisions,
    })
}
