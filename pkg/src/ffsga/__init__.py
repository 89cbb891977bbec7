from .model import Instance, decode, evaluate, estimate_emax
