/// Equal-frequency binning of a numeric column.
///
/// Cut points sit at sorted ranks `ceil(m * n / bins)` for `m = 1..bins`.
/// A cut that would split a run of equal values moves forward to the end of
/// that run. Codes are dense and follow bin order.
pub fn equal_frequency_bins(values: &[f64], bins: usize) -> Vec<u32> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let bins = bins.max(1);
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);

    // upper value of every non-final bin
    let mut thresholds: Vec<f64> = Vec::with_capacity(bins.saturating_sub(1));
    let mut last_cut = 0usize;
    for m in 1..bins {
        let mut cut = (m * n).div_ceil(bins);
        if cut <= last_cut {
            continue;
        }
        while cut < n && sorted[cut - 1] == sorted[cut] {
            cut += 1;
        }
        if cut >= n {
            break;
        }
        thresholds.push(sorted[cut - 1]);
        last_cut = cut;
    }

    let raw: Vec<usize> = values
        .iter()
        .map(|v| thresholds.partition_point(|t| t < v))
        .collect();
    densify(&raw)
}

/// Remaps codes so that only used codes remain, preserving their order.
pub(crate) fn densify(raw: &[usize]) -> Vec<u32> {
    let max = raw.iter().copied().max().unwrap_or(0);
    let mut used = vec![false; max + 1];
    for &r in raw {
        used[r] = true;
    }
    let mut remap = vec![0u32; max + 1];
    let mut next = 0u32;
    for (i, u) in used.iter().enumerate() {
        if *u {
            remap[i] = next;
            next += 1;
        }
    }
    raw.iter().map(|&r| remap[r]).collect()
}
