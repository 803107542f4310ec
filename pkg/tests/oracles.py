"""Independent brute-force oracles shared by unit and acceptance tests."""

import numpy as np


def placement_oracle(p, d, f, xbar, xbars_per_pe, pes_per_tile, bit_w, bit_d):
    """Simulate cell-by-cell weight placement and count hardware units.

    Walks every (kernel position, input-channel row, filter, bit slice)
    and assigns it to a crossbar cell under the rules: kernel positions
    use disjoint crossbars; channels run down rows (new crossbar when rows
    run out); a filter's bit-slice columns stay in one crossbar (new
    crossbar when the remaining columns cannot hold a whole filter).
    Returns (n_xbars, n_pes, n_tiles).
    """
    word_cols = -(-bit_w // bit_d)  # columns per weight word
    if word_cols > xbar:
        raise ValueError("weight word exceeds crossbar width")
    total_xbars = 0
    for _position in range(p * p):
        row_chunks = 0
        remaining_rows = d
        while remaining_rows > 0:
            row_chunks += 1
            remaining_rows -= min(remaining_rows, xbar)
        # place filters column-wise once per row chunk
        xbars_this_position = 0
        for _chunk in range(row_chunks):
            cols_free = 0
            for _filt in range(f):
                if cols_free < word_cols:
                    xbars_this_position += 1
                    cols_free = xbar
                cols_free -= word_cols
        total_xbars += xbars_this_position
    n_pes = -(-total_xbars // xbars_per_pe)
    n_tiles = -(-n_pes // pes_per_tile)
    return total_xbars, n_pes, n_tiles


def cofactor_det(m):
    n = m.shape[0]
    if n == 1:
        return m[0, 0]
    total = 0.0
    for j in range(n):
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        total += ((-1) ** j) * m[0, j] * cofactor_det(minor)
    return total
