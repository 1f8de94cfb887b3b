# Core computation: profiles, rules, axioms, geometry, classifier, sampling, constructions
