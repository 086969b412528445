"""Namespace constants and the vehicle/user vocabulary.

The namespace IRIs are opaque identifiers: nothing is ever dereferenced.
Note that the rdf: and xsd: namespaces here are spelled without "www." --
every bundled dataset, rule file and query uses the same spelling, so the
engine stays internally consistent.
"""

UVSO = "http://utc.fr/uvso/ns#"            # vehicle sales ontology
UVO = "http://utc.fr/uvo/ns#"              # vehicle offers
UVOO = "http://utc.fr/uvoo/ns#"            # offer valuation
UPO = "http://utc.fr/upo/ns#"              # user profile ontology
RDF = "http://w3.org/1999/02/22-rdf-syntax-ns#"
XSD = "http://w3.org/2001/XMLSchema#"
GR = "http://purl.org/goodrelations/v1#"

RDF_TYPE = RDF + "type"

# Vehicle description predicates (the Fig-2-compatible attribute schema).
VEHICLE_CLASS = UVSO + "Automobile"
CHECK_CLASS = UVSO + "Check"
NAME = UVSO + "name"
COLOR = UVSO + "color"
SEATING_CAPACITY = UVSO + "seatingCapacity"
HAS_MANUFACTURER = UVSO + "hasManufacturer"
BODY_STYLE = UVSO + "bodyStyle"
MILEAGE_FROM_ODOMETER = UVSO + "mileageFromOdometer"
MODEL_YEAR = UVSO + "modelYear"
PRODUCTION_DATE = UVSO + "productionDate"
INSPECTED = UVSO + "inspected"
VALID_FROM = UVSO + "validFrom"
IS_REQUIRED = UVSO + "isRequired"
VALUATION = UVO + "valuation"
HAS_CURRENCY_VALUE = UVOO + "hasCurrencyValue"
HAS_VALUE_INT = GR + "hasValueInt"
HAS_VALUE_FLOAT = GR + "hasValueFloat"

# User profile predicates.
USER_CLASS = UPO + "User"
VEHICLE_PREFERENCE_CLASS = UPO + "VehiclePreference"
HAS_VEHICLE_PREFERENCE = UPO + "hasVehiclePreference"
HAS_FAVORITE_ROUTE_TYPE = UPO + "hasFavoriteRouteType"
HAS_FAVORITE_VEHICLE_TYPE = UPO + "hasFavoriteVehicleType"
LONG_DISTANCE_ROUTE = UPO + "longDistanceRoute"

# Body style tokens accepted in preference profiles, mapped to the style
# individuals used in vehicle descriptions ("berline" is the listing term
# for a sedan).
BODY_STYLE_IRIS = {
    "sedan": UVSO + "berline_occasion",
    "crossover": UVSO + "crossover_occasion",
    "suv": UVSO + "suv_occasion",
}
BODY_STYLE_TOKENS = {iri: token for token, iri in BODY_STYLE_IRIS.items()}

PROFILE_TOKENS = (
    "studentProfile",
    "parentProfile",
    "businessProfile",
    "professionalProfile",
)

WELL_KNOWN_PREFIXES = {
    "uvso": UVSO,
    "uvo": UVO,
    "uvoo": UVOO,
    "upo": UPO,
    "rdf": RDF,
    "xsd": XSD,
    "gr": GR,
}


def local_name(iri: str) -> str:
    """Fragment or last path segment of an IRI, for display purposes."""
    for sep in ("#", "/"):
        if sep in iri:
            return iri.rsplit(sep, 1)[1]
    return iri
