//! Enumeration counts checked against an independent orbit computation.

use std::collections::{BTreeMap, BTreeSet};

use polyassembly::tiles::{
    canonical_pair, canonical_single, enumerate_pairs, enumerate_singles, rotation_classes, Tile,
};
use proptest::prelude::*;

type Faces = [u8; 4];

fn rot(f: Faces) -> Faces {
    [f[3], f[0], f[1], f[2]]
}

fn refl(f: Faces) -> Faces {
    [f[0], f[3], f[2], f[1]]
}

fn swap(f: Faces) -> Faces {
    f.map(|c| match c {
        1 => 2,
        2 => 1,
        c => c,
    })
}

fn all() -> Vec<Faces> {
    let mut v = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    v.push([a, b, c, d]);
                }
            }
        }
    }
    v
}

/// Orbit closure under a set of generators.
fn orbit(start: Faces, gens: &[fn(Faces) -> Faces]) -> BTreeSet<Faces> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g(x);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen
}

fn orbit_partition(gens: &[fn(Faces) -> Faces]) -> Vec<BTreeSet<Faces>> {
    let mut done = BTreeSet::new();
    let mut out = Vec::new();
    for x in all() {
        if done.contains(&x) {
            continue;
        }
        let o = orbit(x, gens);
        done.extend(o.iter().copied());
        out.push(o);
    }
    out
}

#[test]
fn rotation_classes_by_brute_force_and_burnside() {
    let classes = orbit_partition(&[rot]);
    assert_eq!(classes.len(), 24);
    // Burnside over C4: fixed colourings of id, r, r^2, r^3.
    let fixed = |g: &dyn Fn(Faces) -> Faces| all().into_iter().filter(|&x| g(x) == x).count();
    let burnside = (fixed(&|x| x) + fixed(&rot) + fixed(&|x| rot(rot(x))) + fixed(&|x| rot(rot(rot(x))))) / 4;
    assert_eq!(burnside, 24);
    assert_eq!(rotation_classes().len(), 23);
}

#[test]
fn thirteen_single_tiles() {
    let orbits = orbit_partition(&[rot, swap]);
    let nonzero = orbits.iter().filter(|o| !o.contains(&[0, 0, 0, 0])).count();
    assert_eq!(nonzero, 13);
    let singles = enumerate_singles();
    assert_eq!(singles.len(), 13);
    assert!(!singles.contains(&Tile::new([0, 0, 0, 0])));
    // One library representative per brute-force orbit.
    for o in orbits.iter().filter(|o| !o.contains(&[0, 0, 0, 0])) {
        let reps: BTreeSet<Tile> = o.iter().map(|&f| canonical_single(&Tile::new(f))).collect();
        assert_eq!(reps.len(), 1);
        assert!(singles.contains(reps.iter().next().unwrap()));
    }
}

#[test]
fn table_one_tiles_are_in_the_catalogue() {
    let singles = enumerate_singles();
    for f in [
        [1, 2, 0, 0],
        [1, 0, 0, 0],
        [1, 2, 1, 2],
        [1, 0, 2, 0],
        [1, 0, 1, 0],
        [1, 1, 1, 1],
        [1, 1, 0, 0],
        [1, 2, 1, 0],
        [1, 1, 2, 0],
        [1, 2, 1, 1],
        [1, 1, 2, 2],
        [1, 2, 2, 0],
        [1, 1, 1, 0],
    ] {
        assert!(singles.contains(&canonical_single(&Tile::new(f))), "{f:?}");
    }
}

#[test]
fn one_hundred_and_six_pairs() {
    let classes = orbit_partition(&[rot]);
    let class_of: BTreeMap<Faces, usize> =
        classes.iter().enumerate().flat_map(|(i, o)| o.iter().map(move |&f| (f, i))).collect();
    let reps: Vec<Faces> = classes.iter().map(|o| *o.iter().next().unwrap()).collect();
    let zero = class_of[&[0, 0, 0, 0]];
    let nonzero: Vec<usize> = (0..classes.len()).filter(|&i| i != zero).collect();

    let mut pairs = BTreeSet::new();
    for (k, &i) in nonzero.iter().enumerate() {
        for &j in &nonzero[k + 1..] {
            pairs.insert((i, j));
        }
    }
    assert_eq!(pairs.len(), 253);

    let act = |p: (usize, usize), g: &dyn Fn(Faces) -> Faces| {
        let (x, y) = (class_of[&g(reps[p.0])], class_of[&g(reps[p.1])]);
        (x.min(y), x.max(y))
    };
    let group: [&dyn Fn(Faces) -> Faces; 4] = [&|x| x, &swap, &refl, &|x| swap(refl(x))];

    // Burnside: average number of fixed pairs.
    let fixed: Vec<usize> = group.iter().map(|g| pairs.iter().filter(|&&p| act(p, *g) == p).count()).collect();
    assert_eq!(fixed, vec![253, 13, 139, 19]);
    assert_eq!(fixed.iter().sum::<usize>() / 4, 106);

    // Direct orbit count.
    let mut seen = BTreeSet::new();
    let mut orbits = 0;
    for &p in &pairs {
        if seen.contains(&p) {
            continue;
        }
        orbits += 1;
        for g in &group {
            seen.insert(act(p, *g));
        }
    }
    assert_eq!(orbits, 106);

    let lib = enumerate_pairs();
    assert_eq!(lib.len(), 106);
    let unique: BTreeSet<_> = lib.iter().collect();
    assert_eq!(unique.len(), 106);
    for p in &lib {
        assert_ne!(p.a, p.b);
        assert_eq!(canonical_pair(&p.a, &p.b), *p);
    }
}

#[test]
fn mirror_swap_image_maps_to_same_pair() {
    let a = Tile::new([1, 2, 0, 0]);
    let b = Tile::new([1, 2, 1, 0]);
    let img = (a.reflected().colour_swapped(), b.reflected().colour_swapped());
    assert_eq!(canonical_pair(&a, &b), canonical_pair(&img.0, &img.1));
    assert_eq!(canonical_pair(&a, &b), canonical_pair(&b, &a));
}

fn any_tile() -> impl Strategy<Value = Tile> {
    prop::array::uniform4(0u8..3).prop_map(Tile::new)
}

proptest! {
    #[test]
    fn canonical_single_is_orbit_invariant(t in any_tile(), r in 0u8..4, s in any::<bool>()) {
        let c = canonical_single(&t);
        prop_assert_eq!(canonical_single(&c), c);
        prop_assert_eq!(canonical_single(&t.transform(r, false, s)), c);
    }

    #[test]
    fn canonical_pair_is_orbit_invariant(
        a in any_tile(), b in any_tile(),
        ra in 0u8..4, rb in 0u8..4, refl in any::<bool>(), s in any::<bool>(),
    ) {
        let c = canonical_pair(&a, &b);
        let a2 = a.transform(0, refl, s).rotated(ra);
        let b2 = b.transform(0, refl, s).rotated(rb);
        prop_assert_eq!(canonical_pair(&b2, &a2), c);
    }
}
