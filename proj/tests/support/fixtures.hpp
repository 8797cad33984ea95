#pragma once

#include <random>
#include <string>
#include <vector>

#include "sparql_assist/fixture_endpoint.hpp"
#include "sparql_assist/metadata.hpp"

namespace sparql_assist::testing {

inline const std::string kUp = "http://purl.uniprot.org/core/";
inline const std::string kEx = "http://example.org/";
inline const std::string kXsdString = "http://www.w3.org/2001/XMLSchema#string";

// up:Taxon has scientificName (900) and rank (500); up:Protein has mnemonic.
std::vector<VoidRow> taxon_void_rows();
// Three SELECT, one CONSTRUCT and one ASK example; exactly two mention "taxon".
ExampleCatalog five_examples();
// The taxon VoID plus the five examples.
void register_taxon_fixture(FixtureEndpoint& fixture);

std::string taxon_query();  // ends right after `?species `

// ex:Person(25) with ex:name -> xsd:string (100) and ex:knows -> ex:Person (40).
std::vector<VoidRow> person_void_rows();

// Random schema with up to `max_classes` classes under `ns`. Object classes
// are drawn from the schema's own classes.
VoidSchema random_schema(std::mt19937& rng, std::size_t max_classes, const std::string& ns);

// Queries separated by lines holding only "---".
std::vector<std::string> load_corpus(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace sparql_assist::testing
