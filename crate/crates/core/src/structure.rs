//! Generators and closure maps: digit-restriction fractals, rational singletons
//! and boxes, the diagonal and order relations, and affine images with
//! coefficients in `Z[1/b]`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::automaton::{product, Alphabet, Limits, NondetAutomaton, SafetyAutomaton};
use crate::error::{Error, Result};
use crate::rational::{format_rational, in_unit_interval, Rational};

/// One-state automaton looping on the allowed digit tuples.
pub fn make_digit_set(base: u32, arity: usize, allowed: &[Vec<u32>]) -> Result<SafetyAutomaton> {
    if allowed.is_empty() {
        return Err(Error::EmptyDigitSet);
    }
    let alphabet = Alphabet::new(base, arity)?;
    let letters = allowed
        .iter()
        .map(|tuple| alphabet.encode(tuple))
        .collect::<Result<Vec<_>>>()?;
    SafetyAutomaton::from_transitions(base, arity, 1, 0, letters.into_iter().map(|l| (0, l, 0)))
}

/// Middle-thirds Cantor set.
pub fn cantor() -> SafetyAutomaton {
    make_digit_set(3, 1, &[vec![0], vec![2]]).expect("valid preset")
}

/// Sierpinski carpet: all base-3 digit pairs except `(1,1)`.
pub fn carpet() -> SafetyAutomaton {
    let allowed: Vec<Vec<u32>> = (0..3)
        .flat_map(|x| (0..3).map(move |y| vec![x, y]))
        .filter(|t| t != &[1, 1])
        .collect();
    make_digit_set(3, 2, &allowed).expect("valid preset")
}

/// Menger sponge: triples with at most one middle digit.
pub fn menger() -> SafetyAutomaton {
    let allowed: Vec<Vec<u32>> = (0..27u32)
        .map(|l| vec![l / 9, (l / 3) % 3, l % 3])
        .filter(|t| t.iter().filter(|&&d| d == 1).count() <= 1)
        .collect();
    make_digit_set(3, 3, &allowed).expect("valid preset")
}

/// All expansions of all points of `[lower, upper] ∩ [0,1]`, one track.
///
/// A state is the interval the remaining tail value must hit. Reading digit `a`
/// maps `[l, u]` to `[b l - a, b u - a]`, clipped to `[0,1]`; both ends follow
/// eventually periodic orbits, so the state set is finite.
fn interval_track(
    base: u32,
    lower: &Rational,
    upper: &Rational,
    limits: &Limits,
) -> Result<SafetyAutomaton> {
    let zero = Rational::zero();
    let one = Rational::one();
    let b = Rational::from_integer(base.into());
    let clip = |l: Rational, u: Rational| -> Option<(Rational, Rational)> {
        let l = if l < zero { zero.clone() } else { l };
        let u = if u > one { one.clone() } else { u };
        (l <= u).then_some((l, u))
    };
    let Some(start) = clip(lower.clone(), upper.clone()) else {
        return SafetyAutomaton::empty(base, 1);
    };
    let mut ids: HashMap<(Rational, Rational), usize> = HashMap::new();
    let mut states = vec![start.clone()];
    ids.insert(start, 0);
    let mut transitions = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let (l, u) = states[next].clone();
        for digit in 0..base {
            let a = Rational::from_integer(digit.into());
            let Some(target) = clip(&b * &l - &a, &b * &u - &a) else {
                continue;
            };
            let id = match ids.get(&target) {
                Some(&id) => id,
                None => {
                    if states.len() >= limits.max_states {
                        return Err(Error::StateCap {
                            limit: limits.max_states,
                        });
                    }
                    ids.insert(target.clone(), states.len());
                    states.push(target);
                    states.len() - 1
                }
            };
            transitions.push((next, digit, id));
        }
        next += 1;
    }
    SafetyAutomaton::from_transitions(base, 1, states.len(), 0, transitions)
}

fn check_unit(value: &Rational) -> Result<()> {
    if in_unit_interval(value) {
        Ok(())
    } else {
        Err(Error::OutsideUnitInterval(format_rational(value)))
    }
}

/// The point `q`; the language holds every expansion of it (two per coordinate
/// for b-adic rationals strictly inside `(0,1)`).
pub fn singleton(base: u32, point: &[Rational], limits: &Limits) -> Result<SafetyAutomaton> {
    let pairs: Vec<(Rational, Rational)> = point.iter().map(|q| (q.clone(), q.clone())).collect();
    for q in point {
        check_unit(q)?;
    }
    box_set(base, &pairs, limits)
}

/// The box `Π [l_i, u_i]`; endpoints must lie in `[0,1]`.
pub fn box_set(
    base: u32,
    bounds: &[(Rational, Rational)],
    limits: &Limits,
) -> Result<SafetyAutomaton> {
    if bounds.is_empty() {
        return Err(Error::InvalidArity);
    }
    Alphabet::new(base, bounds.len())?;
    let mut tracks = Vec::with_capacity(bounds.len());
    for (l, u) in bounds {
        check_unit(l)?;
        check_unit(u)?;
        if l > u {
            return Err(Error::EmptyInterval {
                lower: format_rational(l),
                upper: format_rational(u),
            });
        }
        tracks.push(interval_track(base, l, u, limits)?);
    }
    let mut result = tracks[0].clone();
    for t in &tracks[1..] {
        result = product(&result, t, limits)?;
    }
    Ok(result)
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i == 0 || i >= j || j > n {
        return Err(Error::InvalidCoordinates(format!(
            "need 1 <= i < j <= {n}, got i={i}, j={j}"
        )));
    }
    Ok(())
}

/// Relation automaton over `n` free tracks, with tracks `i`, `j` (1-based)
/// constrained by a small deterministic digit relation.
fn pair_relation(
    base: u32,
    n: usize,
    i: usize,
    j: usize,
    states: usize,
    step: impl Fn(usize, u32, u32) -> Option<usize>,
) -> Result<SafetyAutomaton> {
    check_pair(n, i, j)?;
    let alphabet = Alphabet::new(base, n)?;
    let mut transitions = Vec::new();
    for s in 0..states {
        for letter in alphabet.letters() {
            let (di, dj) = (alphabet.digit(letter, i - 1), alphabet.digit(letter, j - 1));
            if let Some(t) = step(s, di, dj) {
                transitions.push((s, letter, t));
            }
        }
    }
    SafetyAutomaton::from_transitions(base, n, states, 0, transitions)
}

/// `{x ∈ [0,1]^n : x_i = x_j}` by value, through the value-equality relation
/// on the two digit streams.
pub fn relation_eq(base: u32, n: usize, i: usize, j: usize) -> Result<SafetyAutomaton> {
    let top = base - 1;
    pair_relation(base, n, i, j, 3, |s, di, dj| match s {
        0 if di == dj => Some(0),
        0 if di + 1 == dj => Some(1),
        0 if di == dj + 1 => Some(2),
        1 if di == top && dj == 0 => Some(1),
        2 if di == 0 && dj == top => Some(2),
        _ => None,
    })
}

/// `{x ∈ [0,1]^n : x_i <= x_j}`. Lexicographic order on streams is monotone in
/// value, and equal values share an expansion, so lexicographic `<=` on some
/// expansion pair denotes exactly the closed order relation.
pub fn relation_le(base: u32, n: usize, i: usize, j: usize) -> Result<SafetyAutomaton> {
    pair_relation(base, n, i, j, 2, |s, di, dj| match s {
        0 if di == dj => Some(0),
        0 if di < dj => Some(1),
        1 => Some(1),
        _ => None,
    })
}

/// `x ↦ (Σ c_i x_i + p) / b^e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineSpec {
    pub coeffs: Vec<i64>,
    pub offset: i64,
    pub scale_exp: u32,
}

impl AffineSpec {
    pub fn new(coeffs: Vec<i64>, offset: i64, scale_exp: u32) -> Self {
        AffineSpec {
            coeffs,
            offset,
            scale_exp,
        }
    }

    pub fn identity(arity: usize) -> Self {
        let mut coeffs = vec![0; arity];
        coeffs[0] = 1;
        AffineSpec::new(coeffs, 0, 0)
    }
}

/// `{(c·x + p)/b^e : x ∈ A} ∩ [0,1]`, one track.
///
/// A synchronous most-significant-digit-first carry transducer relates the
/// digits of `x` and of the output `y`: after `t` digits the remainder
/// `R_t = b^t (Σ c_i x_i|_t + p - b^e y|_t)` is an integer evolving as
/// `R' = b R + Σ c_i x_i - b^e y`, and the equation holds in the limit iff
/// `R_t` stays in `[-Σc⁺, b^e + Σc⁻]` forever. The transducer is composed
/// with `A`, projected onto `y` and determinized. It relates values, not
/// digit strings, so the result holds every expansion of every image point.
pub fn affine_image(
    a: &SafetyAutomaton,
    spec: &AffineSpec,
    limits: &Limits,
) -> Result<SafetyAutomaton> {
    if spec.coeffs.len() != a.arity() {
        return Err(Error::ArityMismatch(spec.coeffs.len(), a.arity()));
    }
    let base = a.base();
    let out = Alphabet::new(base, 1)?;
    let Some(q0) = a.initial() else {
        return SafetyAutomaton::empty(base, 1);
    };
    let scale = (base as i128)
        .checked_pow(spec.scale_exp)
        .filter(|s| *s <= 1 << 40)
        .ok_or_else(|| {
            Error::InvalidArgument(format!("scale exponent {} too large", spec.scale_exp))
        })?;
    let pos: i128 = spec
        .coeffs
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as i128)
        .sum();
    let neg: i128 = spec
        .coeffs
        .iter()
        .filter(|&&c| c < 0)
        .map(|&c| c as i128)
        .sum();
    let (low, high) = (-pos, scale - neg);
    let start = spec.offset as i128;
    if start < low || start > high {
        return SafetyAutomaton::empty(base, 1);
    }
    let alphabet = a.alphabet();
    let weight: Vec<i128> = alphabet
        .letters()
        .map(|l| {
            (0..a.arity())
                .map(|t| spec.coeffs[t] as i128 * alphabet.digit(l, t) as i128)
                .sum()
        })
        .collect();

    let mut nfa = NondetAutomaton::new(out, 0, vec![0]);
    let mut ids: HashMap<(usize, i128), usize> = HashMap::new();
    ids.insert((q0, start), nfa.add_state());
    let mut queue = vec![(q0, start)];
    while let Some((q, rem)) = queue.pop() {
        let from = ids[&(q, rem)];
        for &(x, target) in a.transitions(q) {
            let shifted = base as i128 * rem + weight[x as usize];
            for y in 0..base {
                let next = shifted - scale * y as i128;
                if next < low || next > high {
                    continue;
                }
                let key = (target, next);
                let to = match ids.get(&key) {
                    Some(&id) => id,
                    None => {
                        if nfa.num_states() >= limits.max_states {
                            return Err(Error::StateCap {
                                limit: limits.max_states,
                            });
                        }
                        let id = nfa.add_state();
                        ids.insert(key, id);
                        queue.push(key);
                        id
                    }
                };
                nfa.add_transition(from, y, to);
            }
        }
    }
    nfa.determinize(limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{
        canonical_equal, count_prefixes, intersect, minimize, prefixes, project, saturate,
    };
    use crate::rational::rat;
    use num_bigint::BigUint;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn preset_counts() {
        assert_eq!(count_prefixes(&cantor(), 5), BigUint::from(32u32));
        assert_eq!(count_prefixes(&carpet(), 2), BigUint::from(64u32));
        assert_eq!(count_prefixes(&menger(), 1), BigUint::from(20u32));
    }

    #[test]
    fn menger_oracle_count() {
        let mut count = 0;
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    let middles = [x, y, z].iter().filter(|&&d| d == 1).count();
                    if middles < 2 {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 20);
        assert_eq!(menger().transitions(0).len(), count);
    }

    #[test]
    fn digit_set_errors() {
        assert!(matches!(
            make_digit_set(3, 1, &[]),
            Err(Error::EmptyDigitSet)
        ));
        assert!(matches!(
            make_digit_set(3, 1, &[vec![3]]),
            Err(Error::DigitOutOfRange { digit: 3, base: 3 })
        ));
        assert!(make_digit_set(3, 2, &[vec![1]]).is_err());
    }

    #[test]
    fn presets_are_saturation_fixpoints() {
        for set in [cantor(), carpet(), menger()] {
            let once = saturate(&set, &lim()).unwrap();
            let twice = saturate(&once, &lim()).unwrap();
            assert_eq!(minimize(&once), minimize(&twice));
            assert!(canonical_equal(&set, &once, &lim()).unwrap());
        }
    }

    #[test]
    fn singleton_third_has_both_expansions() {
        let s = singleton(3, &[rat(1, 3)], &lim()).unwrap();
        let mut words = prefixes(&s, 5);
        words.sort();
        assert_eq!(words, vec![vec![0, 2, 2, 2, 2], vec![1, 0, 0, 0, 0]]);
    }

    #[test]
    fn singleton_zero_and_quarter() {
        let z = singleton(2, &[rat(0, 1)], &lim()).unwrap();
        assert_eq!(prefixes(&z, 4), vec![vec![0, 0, 0, 0]]);
        let q = singleton(3, &[rat(1, 4)], &lim()).unwrap();
        // long division of 1/4 in base 3
        let mut digits = Vec::new();
        let (mut num, den) = (1u32, 4u32);
        for _ in 0..8 {
            num *= 3;
            digits.push(num / den);
            num %= den;
        }
        assert_eq!(digits, vec![0, 2, 0, 2, 0, 2, 0, 2]);
        for k in 1..=8 {
            assert_eq!(count_prefixes(&q, k), BigUint::from(1u32));
        }
        assert_eq!(prefixes(&q, 8), vec![digits]);
    }

    #[test]
    fn singleton_rejects_outside_points() {
        assert!(matches!(
            singleton(3, &[rat(4, 3)], &lim()),
            Err(Error::OutsideUnitInterval(_))
        ));
        assert!(singleton(3, &[rat(-1, 3)], &lim()).is_err());
    }

    #[test]
    fn box_examples() {
        let unit = box_set(3, &[(rat(0, 1), rat(1, 1))], &lim()).unwrap();
        assert_eq!(minimize(&unit), SafetyAutomaton::full(3, 1).unwrap());
        let two_thirds = box_set(3, &[(rat(0, 1), rat(2, 3))], &lim()).unwrap();
        assert_eq!(count_prefixes(&two_thirds, 1), BigUint::from(3u32));
        let degenerate = box_set(2, &[(rat(1, 2), rat(1, 2))], &lim()).unwrap();
        let point = singleton(2, &[rat(1, 2)], &lim()).unwrap();
        assert!(canonical_equal(&degenerate, &point, &lim()).unwrap());
        assert!(matches!(
            box_set(2, &[(rat(2, 3), rat(1, 3))], &lim()),
            Err(Error::EmptyInterval { .. })
        ));
    }

    #[test]
    fn box_matches_order_relation_construction() {
        // [l,u] = proj_1({(x,l,u) : l <= x <= u} ∩ ([0,1] × {l} × {u}))
        for (l, u) in [
            (rat(0, 1), rat(2, 3)),
            (rat(1, 4), rat(1, 2)),
            (rat(1, 3), rat(1, 3)),
        ] {
            let base = 3;
            // x_2 <= x_1 by swapping the tracks of x_1 <= x_2
            let le_lx = project(&relation_le(base, 3, 1, 2).unwrap(), &[2, 1, 3], &lim()).unwrap();
            let le_xu = relation_le(base, 3, 1, 3).unwrap();
            let pins = product(
                &SafetyAutomaton::full(base, 1).unwrap(),
                &singleton(base, &[l.clone(), u.clone()], &lim()).unwrap(),
                &lim(),
            )
            .unwrap();
            let meet =
                intersect(&intersect(&le_lx, &le_xu, &lim()).unwrap(), &pins, &lim()).unwrap();
            let via_relations = project(&meet, &[1], &lim()).unwrap();
            let direct = box_set(base, &[(l, u)], &lim()).unwrap();
            assert!(canonical_equal(&via_relations, &direct, &lim()).unwrap());
        }
    }

    #[test]
    fn diagonal_of_cantor_square() {
        let cc = product(&cantor(), &cantor(), &lim()).unwrap();
        let diag = intersect(&relation_eq(3, 2, 1, 2).unwrap(), &cc, &lim()).unwrap();
        let p = project(&diag, &[1], &lim()).unwrap();
        assert!(canonical_equal(&p, &cantor(), &lim()).unwrap());
    }

    #[test]
    fn le_contains_quarter_half() {
        let point = singleton(2, &[rat(1, 4), rat(1, 2)], &lim()).unwrap();
        let le = relation_le(2, 2, 1, 2).unwrap();
        assert!(!intersect(&le, &point, &lim()).unwrap().is_empty());
        let reversed = singleton(2, &[rat(1, 2), rat(1, 4)], &lim()).unwrap();
        assert!(intersect(&le, &reversed, &lim()).unwrap().is_empty());
    }

    #[test]
    fn antisymmetry() {
        let le = relation_le(3, 2, 1, 2).unwrap();
        let ge = project(&le, &[2, 1], &lim()).unwrap();
        let eq = relation_eq(3, 2, 1, 2).unwrap();
        let both = intersect(&le, &ge, &lim()).unwrap();
        assert!(canonical_equal(&both, &eq, &lim()).unwrap());
    }

    #[test]
    fn relation_index_errors() {
        assert!(relation_eq(3, 2, 2, 1).is_err());
        assert!(relation_le(3, 2, 1, 3).is_err());
        assert!(relation_le(3, 2, 0, 1).is_err());
    }

    #[test]
    fn difference_of_cantor_is_interval() {
        let cc = product(&cantor(), &cantor(), &lim()).unwrap();
        let d = affine_image(&cc, &AffineSpec::new(vec![1, -1], 1, 1), &lim()).unwrap();
        let target = box_set(3, &[(rat(0, 1), rat(2, 3))], &lim()).unwrap();
        assert!(canonical_equal(&d, &target, &lim()).unwrap());
    }

    #[test]
    fn scaled_cantor_is_left_third() {
        let img = affine_image(&cantor(), &AffineSpec::new(vec![1], 0, 1), &lim()).unwrap();
        let saturated_left = intersect(
            &cantor(),
            &box_set(3, &[(rat(0, 1), rat(1, 3))], &lim()).unwrap(),
            &lim(),
        )
        .unwrap();
        assert!(canonical_equal(&img, &saturated_left, &lim()).unwrap());
        // digit-shift oracle on the plain language: a 0 then a Cantor word
        let shifted =
            SafetyAutomaton::from_transitions(3, 1, 2, 0, [(0, 0, 1), (1, 0, 1), (1, 2, 1)])
                .unwrap();
        for k in 1..=6 {
            assert_eq!(count_prefixes(&shifted, k), BigUint::from(1u32 << (k - 1)));
        }
        assert!(canonical_equal(&img, &shifted, &lim()).unwrap());
    }

    #[test]
    fn identity_composite_on_singleton() {
        let s = singleton(3, &[rat(1, 3)], &lim()).unwrap();
        let img = affine_image(&s, &AffineSpec::new(vec![3], 0, 1), &lim()).unwrap();
        assert!(canonical_equal(&img, &s, &lim()).unwrap());
        let id = affine_image(&cantor(), &AffineSpec::identity(1), &lim()).unwrap();
        assert!(canonical_equal(&id, &cantor(), &lim()).unwrap());
    }

    #[test]
    fn affine_clips_to_unit_interval() {
        // x + 1 on [0,1] meets [0,1] only at 1
        let full = SafetyAutomaton::full(2, 1).unwrap();
        let img = affine_image(&full, &AffineSpec::new(vec![1], 1, 0), &lim()).unwrap();
        let one = singleton(2, &[rat(1, 1)], &lim()).unwrap();
        assert!(canonical_equal(&img, &one, &lim()).unwrap());
        let gone = affine_image(&full, &AffineSpec::new(vec![1], 2, 0), &lim()).unwrap();
        assert!(gone.is_empty());
    }

    #[test]
    fn affine_arity_mismatch() {
        assert!(matches!(
            affine_image(&cantor(), &AffineSpec::new(vec![1, 1], 0, 0), &lim()),
            Err(Error::ArityMismatch(2, 1))
        ));
    }
}
