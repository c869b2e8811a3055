#!/usr/bin/env python3
"""Convert the MWL24 water-vapour line table shipped with pyrtlib into
HITRAN 2004 fixed-width .par records.

Usage: mwl24_to_par.py <h2o_lineshape.nc> > data/h2o_lines.par

Column conversions (MWL24 -> HITRAN):
  frequency GHz          -> wavenumber cm^-1   (/ 29.9792458)
  intensity Hz cm^2      -> cm^-1/(molecule cm^-2) (/ c in cm/s)
  B2 = E''/(k T0)        -> E'' cm^-1          (* k T0 / (h c), T0 = 296 K)
  widths, shift GHz/bar  -> cm^-1/atm          (* 1.01325 / 29.9792458)
"""
import sys

import h5py

C_CM_PER_S = 2.99792458e10
GHZ_PER_WAVENUMBER = 29.9792458
KT0_WAVENUMBER = 0.695034800 * 296.0
BAR_TO_ATM = 1.01325


def fixed(value, width, decimals):
    """Fortran Fw.d: drop the leading zero when the value would overflow."""
    text = f"{value:{width}.{decimals}f}"
    if len(text) > width:
        text = text.replace("0.", ".", 1)
    if len(text) != width:
        raise ValueError(f"{value} does not fit F{width}.{decimals}")
    return text


def record(row):
    freq_ghz, s1, b2, w0, x, w0s, xs, sh = row[1:9]
    nu = freq_ghz / GHZ_PER_WAVENUMBER
    s = s1 / C_CM_PER_S
    g_air = w0 * BAR_TO_ATM / GHZ_PER_WAVENUMBER
    g_self = w0s * BAR_TO_ATM / GHZ_PER_WAVENUMBER
    e_low = b2 * KT0_WAVENUMBER
    d_air = sh * BAR_TO_ATM / GHZ_PER_WAVENUMBER
    line = (f"{1:2d}{1:1d}{fixed(nu, 12, 6)}{s:10.3E}{0.0:10.3E}"
            f"{fixed(g_air, 5, 4)}{fixed(g_self, 5, 3)}{fixed(e_low, 10, 4)}"
            f"{fixed(x, 4, 2)}{fixed(d_air, 8, 6)}").ljust(160)
    assert len(line) == 160, line
    return line


def main():
    with h5py.File(sys.argv[1]) as f:
        mtx = f["MWL24/mtx"][...]
    for row in mtx:
        print(record(row))


if __name__ == "__main__":
    main()
