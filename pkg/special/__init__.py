"""
特殊函数：ψ 函数族、Bessel 比值与 ψ_G 反函数
"""
from .bessel import bessel_ratio, vmf_kl_bound
from .psi import (
    PSI_EXPONENTIAL,
    ExponentialPsi,
    ExponentialTailPsi,
    GammaPsi,
    GaussianPsi,
    PsiKind,
    build_psi,
    psi_eval,
    psi_gamma_inverse,
)

__all__ = [
    "PsiKind",
    "ExponentialPsi",
    "GaussianPsi",
    "GammaPsi",
    "ExponentialTailPsi",
    "PSI_EXPONENTIAL",
    "psi_eval",
    "psi_gamma_inverse",
    "build_psi",
    "bessel_ratio",
    "vmf_kl_bound",
]
