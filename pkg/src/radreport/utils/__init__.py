from .tsv import has_directive, read_tsv, split_list

__all__ = ['read_tsv', 'split_list', 'has_directive']
