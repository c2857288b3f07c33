//! Domain and addition automata for the codecs.

use super::codec::{Codec, Track};
use crate::automaton::{Alphabet, Automaton, Letter, StateId, DEFAULT_PAD};
use crate::error::Result;

pub(crate) fn alphabet(codec: &Codec, arity: usize) -> Result<Alphabet> {
    Alphabet::new(codec.letter_names(), DEFAULT_PAD, arity)
}

/// Canonical words: no trailing all-zero letter.
pub(crate) fn atomic_domain(codec: &Codec) -> Result<Automaton> {
    let zero_letter = |l: Letter| codec.is_zero_letter(l);
    let aut = Automaton::explore(alphabet(codec, 1)?, vec![true], |_, col| Some(!zero_letter(col[0])), |ok| *ok);
    Ok(aut.min_dfa())
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Tape {
    /// Empty so far, or last letter nonzero.
    Clean,
    /// Last letter was the zero letter.
    Zero,
    Ended,
}

/// Addition with carries, one carry per track.
///
/// Negabinary carries run with the reading order. Fraction carries run against
/// it, so the state holds the carry leaving the current position towards the
/// previous one: it is guessed at the start and must be `0` past the end.
pub(crate) fn atomic_add(codec: &Codec) -> Result<Automaton> {
    let tracks = codec.tracks();
    let base = codec.base_len();
    let digits: Vec<Vec<u32>> = (0..base).map(|l| codec.letter_digits(l)).collect();
    let zero = vec![0u32; tracks.len()];
    let fraction_idx: Vec<usize> =
        tracks.iter().enumerate().filter(|(_, t)| matches!(t, Track::Fraction(_))).map(|(i, _)| i).collect();
    let negabinary_idx = tracks.iter().position(|t| *t == Track::Negabinary);

    let mut inits = Vec::new();
    for mask in 0u32..(1 << fraction_idx.len()) {
        let mut carries = vec![0i32; tracks.len()];
        for (bit, &i) in fraction_idx.iter().enumerate() {
            carries[i] = ((mask >> bit) & 1) as i32;
        }
        if let Some(n) = negabinary_idx {
            carries[n] = carries.iter().sum();
        }
        inits.push((carries, [Tape::Clean; 3]));
    }

    let step = |(carries, tapes): &(Vec<i32>, [Tape; 3]), col: &[Letter]| {
        let mut next_tapes = *tapes;
        let mut ds: [&[u32]; 3] = [&zero, &zero, &zero];
        for t in 0..3 {
            if col[t] == base {
                if tapes[t] == Tape::Zero {
                    return None;
                }
                next_tapes[t] = Tape::Ended;
            } else {
                if tapes[t] == Tape::Ended {
                    return None;
                }
                next_tapes[t] = if codec.is_zero_letter(col[t]) { Tape::Zero } else { Tape::Clean };
                ds[t] = &digits[col[t] as usize];
            }
        }
        let mut next = carries.clone();
        for (i, track) in tracks.iter().enumerate() {
            let (a, b, o) = (ds[0][i] as i32, ds[1][i] as i32, ds[2][i] as i32);
            let c = carries[i];
            match *track {
                Track::Negabinary => {
                    let s = a + b + c - o;
                    if s % 2 != 0 {
                        return None;
                    }
                    next[i] = -s / 2;
                }
                Track::Elementary(p) => {
                    if (a + b) % p as i32 != o {
                        return None;
                    }
                }
                Track::Fraction(p) => {
                    let c_in = o + p as i32 * c - a - b;
                    if !(0..=1).contains(&c_in) {
                        return None;
                    }
                    next[i] = c_in;
                }
            }
        }
        Some((next, next_tapes))
    };
    let accept = |(carries, tapes): &(Vec<i32>, [Tape; 3])| {
        carries.iter().all(|&c| c == 0) && tapes.iter().all(|&t| t != Tape::Zero)
    };
    Ok(Automaton::explore(alphabet(codec, 3)?, inits, step, accept).min_dfa())
}

/// `None` marks a component whose words have all ended.
type Slot = Option<StateId>;

fn advance(aut: &Automaton, slot: Slot, letters: &[Letter], pad: Letter) -> Option<Slot> {
    if letters.iter().all(|&l| l == pad) {
        return match slot {
            Some(q) if aut.is_accepting(q) => Some(None),
            Some(_) => None,
            None => Some(None),
        };
    }
    let q = slot?;
    aut.step(q, aut.alphabet().pack(letters)).map(Some)
}

fn finished(aut: &Automaton, slot: Slot) -> bool {
    slot.is_none_or(|q| aut.is_accepting(q))
}

/// Convolutions of component relations of the same arity, as one relation over pair letters.
pub(crate) fn pair_relation(codec: &Codec, a: &Automaton, b: &Automaton) -> Result<Automaton> {
    let k = a.arity();
    let (pa, pb) = (a.alphabet().pad_letter(), b.alphabet().pad_letter());
    let outer_pad = codec.base_len();
    let split = |l: Letter| if l == outer_pad { (pa, pb) } else { codec.split_letter(l).unwrap() };
    let (da, db) = (a.min_dfa(), b.min_dfa());
    let inits = vec![(Some(da.initial()[0]), Some(db.initial()[0]))];
    let step = |&(sa, sb): &(Slot, Slot), col: &[Letter]| {
        let mut xs = [0 as Letter; 8];
        let mut ys = [0 as Letter; 8];
        for (t, &l) in col.iter().enumerate() {
            (xs[t], ys[t]) = split(l);
        }
        let na = advance(&da, sa, &xs[..k], pa)?;
        let nb = advance(&db, sb, &ys[..k], pb)?;
        Some((na, nb))
    };
    let accept = |&(sa, sb): &(Slot, Slot)| finished(&da, sa) && finished(&db, sb);
    Ok(Automaton::explore(alphabet(codec, k)?, inits, step, accept).min_dfa())
}
