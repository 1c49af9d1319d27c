# src/rhosocial/tevie/__init__.py
"""RhoSocial TEVIE: 2D TE volume integral equation solver

The package discretizes the domain integral equation for transverse-electric
scattering on penetrable inhomogeneous objects with mid-point collocation on a
uniform grid, and solves it either densely or matrix-free.

Layering, bottom to top:

- ``specfun``: Bessel and Hankel functions of order 0 and 1
- ``scene`` / ``config``: background medium, grid, contrasts, plane wave, scene files
- ``kernels``: Green's function and the A, B, G, K kernel tensors
- ``symbol``: Mikhlin symbol of the singular operator and spectral predictions
- ``assembly``: dense system matrix with equal-area-disk self terms
- ``fastop``: block-Toeplitz FFT matrix-vector product
- ``solver``: restarted GMRES, dense LU, symbol-diagonal preconditioner
- ``oracle``: cylinder series solution and other independent references
- ``cli``: batch front end (``tevie --mode forward|spectrum|validate|selfcheck``)
"""

# __version__ is now defined in pyproject.toml
