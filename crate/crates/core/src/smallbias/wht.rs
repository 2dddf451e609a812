/// In-place unnormalized Walsh–Hadamard transform over Z_2^m.
///
/// After the call, `data[alpha] = Σ_x (-1)^{alpha·x} data_before[x]`.
/// The length must be a power of two.
pub fn fwht(data: &mut [i64]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "transform length {n} is not a power of two");
    let mut half = 1;
    while half < n {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_sum() {
        let input: Vec<i64> = vec![3, -1, 4, 1, -5, 9, 2, 6];
        let mut out = input.clone();
        fwht(&mut out);
        for (alpha, &w) in out.iter().enumerate() {
            let direct: i64 =
                input.iter().enumerate().map(|(x, &v)| if (alpha & x).count_ones() % 2 == 0 { v } else { -v }).sum();
            assert_eq!(w, direct);
        }
    }

    #[test]
    fn involution_up_to_scale() {
        let input: Vec<i64> = (0..16).map(|i| (i * 7 % 5) - 2).collect();
        let mut out = input.clone();
        fwht(&mut out);
        fwht(&mut out);
        let scaled: Vec<i64> = input.iter().map(|v| v * 16).collect();
        assert_eq!(out, scaled);
    }
}
