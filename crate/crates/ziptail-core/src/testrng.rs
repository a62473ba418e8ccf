//! A deterministic generator for hand-walked tests: replays a fixed list
//! of `u64` words, so transition decisions can be scripted exactly.

use rand::RngCore;

pub(crate) struct SeqRng {
    words: alloc::vec::Vec<u64>,
    next: usize,
}

impl SeqRng {
    /// Scripts the generator so that successive `random::<f64>()` calls
    /// return exactly the given unit-interval values.
    pub(crate) fn from_unit_floats(floats: &[f64]) -> Self {
        let words = floats
            .iter()
            .map(|&f| {
                assert!((0.0..1.0).contains(&f), "unit float out of range: {f}");
                ((f * (1u64 << 53) as f64) as u64) << 11
            })
            .collect();
        SeqRng { words, next: 0 }
    }
}

impl RngCore for SeqRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let w = *self.words.get(self.next).expect("scripted RNG exhausted");
        self.next += 1;
        w
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn scripted_floats_round_trip() {
        let mut rng = SeqRng::from_unit_floats(&[0.75, 0.0, 0.5]);
        assert_eq!(rng.random::<f64>(), 0.75);
        assert_eq!(rng.random::<f64>(), 0.0);
        assert_eq!(rng.random::<f64>(), 0.5);
    }
}
