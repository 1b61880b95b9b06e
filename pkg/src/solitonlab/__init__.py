"""1D soliton laboratory: one condensate-density soliton family in three
incarnations — the weakly interacting condensate (GPE), hard-core bosons
at half filling (HGPE), and the easy-plane ferromagnetic spin chain.
"""

__version__ = "0.1.0"
